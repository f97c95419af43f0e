"""Acceptance criteria, one test per criterion; the summary prints PASS/FAIL lines."""

from __future__ import annotations

import random
import time

import pytest

from cdcodes.bounds import (
    KnownValueRegistry,
    best_bound,
    best_parallel,
    bound_improved_linkage,
    bound_parallel,
)
from cdcodes.constructions import (
    ParallelLinkageParams,
    build_parallel,
    default_rank_codes,
    generalized_parallel_linkage,
    lifted_mrd,
    linkage,
    parallel_linkage,
    singleton,
)
from cdcodes.field import field_create
from cdcodes.matrix import MatrixOverFq
from cdcodes.rankmetric import (
    GabidulinCode,
    MrdCodeSpec,
    delsarte_rank_distribution,
    min_rank_distance,
    mrd_matrices,
)
from cdcodes.subspace import Subspace, random_subspace, subspace_distance, verify_cdc


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@pytest.mark.criterion(1, "Delsarte exactness for Q_2(8,4,2)")
def test_delsarte_exactness():
    with Clock() as clock:
        dist = delsarte_rank_distribution(MrdCodeSpec(2, 8, 4, 2))
    assert dist.counts == {0: 1, 2: 8925, 3: 956250, 4: 15812040}
    assert dist.total == 2**24
    assert clock.elapsed < 1.0


@pytest.mark.criterion(2, "Delsarte sum invariant over the small grid")
def test_delsarte_sum_invariant():
    checked = 0
    with Clock() as clock:
        for q in (2, 3, 4, 5):
            for n in range(1, 7):
                for m in range(n, 14):
                    for d in range(1, n + 1):
                        dist = delsarte_rank_distribution(MrdCodeSpec(q, m, n, d))
                        assert dist[0] == 1
                        assert all(dist[r] == 0 for r in range(1, d))
                        assert dist.total == q ** (m * (n - d + 1)), (q, m, n, d)
                        checked += 1
        special = delsarte_rank_distribution(MrdCodeSpec(2, 10, 4, 2))
    assert special[4] == 1058084808
    assert checked == 4 * sum(n * (14 - n) for n in range(1, 7))
    assert clock.elapsed < 10.0


@pytest.mark.criterion(3, "Gabidulin enumeration agrees with the Delsarte formula")
def test_oracle_equivalence():
    with Clock() as clock:
        for spec in (
            MrdCodeSpec(2, 3, 3, 2),
            MrdCodeSpec(2, 4, 4, 2),
            MrdCodeSpec(2, 4, 4, 3),
            MrdCodeSpec(3, 3, 3, 2),
        ):
            code = GabidulinCode(spec)
            assert code.rank_histogram() == delsarte_rank_distribution(spec).counts, spec
            assert min_rank_distance(list(code)) == spec.d, spec
    assert clock.elapsed < 120.0


@pytest.mark.criterion(4, "Reproduction of the four published bound values")
def test_bound_reproduction():
    reg = KnownValueRegistry.shipped()
    assert reg.lookup(2, 8, 4, 4).value == 4801
    assert reg.lookup(2, 12, 4, 4).value == 19676797
    assert reg.lookup(2, 12, 6, 6).value == 16865630
    with Clock() as clock:
        split = bound_parallel(2, 12, 4, 4, 8, 0, reg=reg)
        values = [best_bound(2, n, d, k, reg) for n, d, k in ((13, 4, 4), (17, 4, 4), (19, 6, 6))]
    assert split.value == 19673822
    assert [c.value for c in values] == [157337054, 644769570782, 4527333091203726]
    assert all(c.replay() for c in [split, *values])
    assert clock.elapsed < 5.0


@pytest.mark.criterion(5, "Full verification of the 4622-word parallel linkage code")
def test_explicit_construction_verification():
    code = build_parallel(ParallelLinkageParams(2, 4, 4, 4, 4))
    assert len(code) == 4622 and code.n == 8
    with Clock() as single:
        serial = verify_cdc(code, workers=1)
    with Clock() as pooled:
        parallel = verify_cdc(code, workers=2)
    assert serial.ok and serial.observed_min_distance == 4
    assert serial.pairs_checked == 4622 * 4621 // 2
    assert serial == parallel
    assert single.elapsed < 300.0
    assert pooled.elapsed < 300.0


@pytest.mark.criterion(6, "Specialization identities")
def test_specialization_identities():
    with Clock() as clock:
        direct = lifted_mrd(2, 8, 4, 4)
        linked = linkage(singleton(2, 4, 4), mrd_matrices(2, 4, 4, 2), 2)
        assert len(direct) == len(linked) == 4096
        assert direct.keys() == linked.keys()

        params = ParallelLinkageParams(2, 4, 4, 4, 4)
        U, V = singleton(2, 4, 4), singleton(2, 4, 4)
        Q1, Q2 = default_rank_codes(params)
        a = generalized_parallel_linkage(params, U, V, Q1, Q2)
        b = parallel_linkage(params, U, V, Q1, Q2)
        assert len(a) == len(b) == 4622
        assert a.keys() == b.keys()
    assert clock.elapsed < 60.0


@pytest.mark.criterion(7, "Parallel linkage dominates improved linkage at the same split")
def test_dominance():
    reg = KnownValueRegistry.shipped()
    violations = []
    compared = 0
    with Clock() as clock:
        for q in (2, 3):
            for n in range(8, 21):
                for d, k in ((4, 4), (6, 6)):
                    par = best_parallel(q, n, d, k, reg)
                    if par is None:
                        continue  # n < 2k: no legal split
                    m = par.params["n1"]
                    if not (k <= m < n and n - m >= d // 2):
                        continue
                    imp = bound_improved_linkage(q, n, d, k, m, reg)
                    compared += 1
                    if par.value < imp.value:
                        violations.append((q, n, d, k, m, par.value, imp.value))
    assert compared > 0
    assert clock.elapsed < 30.0
    assert not violations, "improved linkage exceeds parallel linkage at " + "; ".join(
        f"q={q} n={n} d={d} k={k} split={m}: {p} < {i}" for q, n, d, k, m, p, i in violations
    )


@pytest.mark.criterion(8, "Subspace distance satisfies the metric axioms")
def test_metric_axioms():
    F = field_create(2)
    rng = random.Random(20240817)
    n = 8
    with Clock() as clock:
        for _ in range(10_000):
            U, V, W = (random_subspace(F, n, rng.randrange(1, n + 1), rng) for _ in range(3))
            if rng.random() < 0.1:
                # same space, different generator
                T = MatrixOverFq.identity(F, U.k)
                if U.k > 1:
                    rows = T.to_rows()
                    rows[0] = [a ^ b for a, b in zip(rows[0], rows[1])]
                    T = MatrixOverFq.from_rows(F, rows)
                V = Subspace.from_matrix(T @ U.generator)
            duv, dvw, duw = subspace_distance(U, V), subspace_distance(V, W), subspace_distance(U, W)
            assert duv == subspace_distance(V, U)
            assert (duv == 0) == (U == V)
            assert subspace_distance(U, U) == 0
            assert duw <= duv + dvw
    assert clock.elapsed < 30.0
