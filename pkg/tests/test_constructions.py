import itertools
import random

import pytest

from cdcodes.bounds import KnownValueRegistry, bound_parallel
from cdcodes.constructions import (
    ParallelLinkageParams,
    ScRepresentation,
    build_parallel,
    default_rank_codes,
    generalized_parallel_linkage,
    lifted_mrd,
    linkage,
    parallel_linkage,
    singleton,
)
from cdcodes.field import field_create
from cdcodes.matrix import MatrixOverFq, vstack
from cdcodes.rankmetric import mrd_matrices
from cdcodes.subspace import ConstantDimensionCode, Sample, Subspace, verify_cdc

F2 = field_create(2)
P4 = ParallelLinkageParams(2, 4, 4, 4, 4)
P_SHIFT = ParallelLinkageParams(2, 4, 4, 4, 5, t=1)


@pytest.fixture(scope="module")
def code_4622():
    return build_parallel(P4)


@pytest.fixture(scope="module")
def code_shifted():
    return build_parallel(P_SHIFT)


def all_subspaces(F, n, k):
    seen = {}
    for entries in itertools.product(range(F.q), repeat=k * n):
        M = MatrixOverFq(F, k, n, entries)
        if M.rank() == k:
            S = Subspace.from_matrix(M)
            seen.setdefault(S.key(), S)
    return list(seen.values())


def test_lifted_mrd_sizes():
    assert len(lifted_mrd(2, 8, 4, 4)) == 4096
    assert len(lifted_mrd(2, 6, 3, 4)) == 64
    single = lifted_mrd(2, 4, 4, 4)
    assert len(single) == 1 and single.codewords[0].generator == MatrixOverFq.identity(F2, 4)


def test_lifted_mrd_bad_params():
    with pytest.raises(ValueError):
        lifted_mrd(2, 8, 4, 3)
    with pytest.raises(ValueError):
        lifted_mrd(2, 8, 1, 4)


def test_lifted_mrd_verifies():
    rep = verify_cdc(lifted_mrd(2, 8, 4, 4))
    assert rep.ok and rep.observed_min_distance == 4


def test_linkage_with_all_planes_of_f2_cubed():
    planes = all_subspaces(F2, 3, 2)
    assert len(planes) == 7
    U = ScRepresentation(ConstantDimensionCode(F2, 3, 2, planes, 2))
    Q = mrd_matrices(2, 2, 2, 1)
    assert len(Q) == 16
    code = linkage(U, Q, 1)
    assert len(code) == 112
    assert code.claimed_min_distance == 2
    rep = verify_cdc(code)
    assert rep.ok and rep.observed_min_distance == 2


def test_linkage_shape_mismatch():
    with pytest.raises(ValueError):
        linkage(singleton(2, 4, 3), mrd_matrices(2, 2, 3, 1))


def test_lifted_equals_linkage_of_singleton():
    direct = lifted_mrd(2, 7, 3, 4)
    linked = linkage(singleton(2, 3, 3), mrd_matrices(2, 3, 4, 2), 2)
    assert direct.keys() == linked.keys()


def test_parallel_size_and_halves(code_4622):
    assert len(code_4622) == 4096 + 526
    assert code_4622.claimed_min_distance == 4


def test_generalized_t0_equals_parallel():
    U, V = singleton(2, 4, 4), singleton(2, 4, 4)
    Q1, Q2 = default_rank_codes(P4)
    a = parallel_linkage(P4, U, V, Q1, Q2)
    b = generalized_parallel_linkage(P4, U, V, Q1, Q2)
    assert a.keys() == b.keys()


def test_cross_rank_between_halves(code_4622, code_shifted):
    rng = random.Random(2024)
    for code, split in ((code_4622, 4096), (code_shifted, 32768)):
        k, d = 4, 4
        first, second = code.codewords[:split], code.codewords[split:]
        for _ in range(400):
            W1, W2 = rng.choice(first), rng.choice(second)
            assert vstack(W1.generator, W2.generator).rank() >= k + d // 2


def test_shifted_size_and_sample(code_shifted):
    assert len(code_shifted) == 2**15 + 1086
    rep = verify_cdc(code_shifted, sampling=Sample(20000, seed=3))
    assert rep.ok and not rep.certified


def test_construction_matches_formula(code_4622, code_shifted):
    bare = KnownValueRegistry()
    assert bound_parallel(2, 8, 4, 4, 4, 0, reg=bare).value == len(code_4622)
    assert bound_parallel(2, 9, 4, 4, 4, 1, reg=bare).value == len(code_shifted)


def test_rank_three_q2_rejected():
    U, V = singleton(2, 4, 4), singleton(2, 4, 4)
    Q1, Q2 = default_rank_codes(P4)
    bad = MatrixOverFq.from_rows(F2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]])
    with pytest.raises(ValueError, match="rank 3"):
        parallel_linkage(P4, U, V, Q1, Q2 + [bad])


def test_shift_out_of_range():
    with pytest.raises(ValueError, match="t=2"):
        ParallelLinkageParams(2, 4, 4, 4, 5, t=2).validate()
    with pytest.raises(ValueError):
        parallel_linkage(P_SHIFT, singleton(2, 4, 4), singleton(2, 4, 4), [], [])


def test_parameter_errors():
    with pytest.raises(ValueError):
        ParallelLinkageParams(2, 4, 3, 4, 4).validate()
    with pytest.raises(ValueError):
        ParallelLinkageParams(2, 2, 4, 4, 4).validate()
    Q1, Q2 = default_rank_codes(P4)
    with pytest.raises(ValueError, match="n1"):
        parallel_linkage(P4, singleton(2, 5, 4), singleton(2, 4, 4), Q1, Q2)


def test_zero_only_q2_keeps_distance():
    U, V = singleton(2, 4, 4), singleton(2, 4, 4)
    Q1, _ = default_rank_codes(P4)
    code = parallel_linkage(P4, U, V, Q1, [MatrixOverFq.zeros(F2, 4, 4)])
    assert len(code) == 4097
    rep = verify_cdc(code)
    assert rep.ok and rep.observed_min_distance == 4


def test_parallel_with_lifted_base_codes():
    # non-trivial base codes: 8-word lifted MRD codes in F_2^4
    params = ParallelLinkageParams(2, 3, 2, 4, 4)
    U = ScRepresentation(lifted_mrd(2, 4, 3, 2))
    V = ScRepresentation(lifted_mrd(2, 4, 3, 2))
    code = build_parallel(params, U, V)
    bare = KnownValueRegistry()
    bare.add(2, 4, 2, 3, len(U))
    assert len(code) == bound_parallel(2, 8, 2, 3, 4, 0, reg=bare).value
    rep = verify_cdc(code, sampling=Sample(20000, seed=9))
    assert rep.ok


@pytest.mark.slow
def test_shifted_full_verification(code_shifted):
    rep = verify_cdc(code_shifted, force=True)
    assert rep.ok and rep.observed_min_distance == 4
