import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdcodes.constructions import lifted_mrd
from cdcodes.field import field_create
from cdcodes.matrix import MatrixOverFq
from cdcodes.subspace import (
    CodeFormatError,
    ConstantDimensionCode,
    Sample,
    Subspace,
    parse_code,
    random_subspace,
    subspace_distance,
    subspace_from_matrix,
    verify_cdc,
)

F2 = field_create(2)
F3 = field_create(3)


def span(rows, F=F2):
    return subspace_from_matrix(MatrixOverFq.from_rows(F, rows))


def vectors_of(U):
    # every vector of the row space, as tuples
    F = U.field
    out = set()
    G = U.generator
    for coeffs in itertools.product(range(F.q), repeat=U.k):
        v = [0] * U.n
        for c, i in zip(coeffs, range(U.k)):
            v = [F.add(x, F.mul(c, y)) for x, y in zip(v, G.row(i))]
        out.add(tuple(v))
    return out


def naive_distance(U, W):
    inter = len(vectors_of(U) & vectors_of(W))
    dim_cap = 0
    while U.field.q ** dim_cap < inter:
        dim_cap += 1
    return U.k + W.k - 2 * dim_cap


def test_canonical_generator():
    G = MatrixOverFq.from_rows(F2, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]])
    assert subspace_from_matrix(G).generator == G


def test_row_space_invariance():
    a = span([[1, 1, 0, 1], [0, 1, 1, 0]])
    b = span([[0, 1, 1, 0], [1, 1, 0, 1]])
    c = span([[1, 0, 1, 1], [0, 1, 1, 0]])
    assert a == b == c
    assert hash(a) == hash(c)


def test_rank_deficient_rejected():
    with pytest.raises(ValueError):
        span([[1, 1, 0], [1, 1, 0]])


def test_distance_examples():
    U = span([[1, 0, 0, 0], [0, 1, 0, 0]])
    assert subspace_distance(U, U) == 0
    assert subspace_distance(U, span([[0, 0, 1, 0], [0, 0, 0, 1]])) == 4
    assert subspace_distance(U, span([[0, 1, 0, 0], [0, 0, 1, 0]])) == 2


def test_distance_ambient_mismatch():
    with pytest.raises(ValueError):
        subspace_distance(span([[1, 0, 0]]), span([[1, 0, 0, 0]]))


@settings(max_examples=80)
@given(st.integers(0, 2**32), st.sampled_from([F2, F3]))
def test_distance_matches_intersection_oracle(seed, F):
    rng = random.Random(seed)
    n = rng.randrange(2, 5)
    U = random_subspace(F, n, rng.randrange(1, n + 1), rng)
    W = random_subspace(F, n, rng.randrange(1, n + 1), rng)
    assert subspace_distance(U, W) == naive_distance(U, W)


def _tiny_code(rows_list, d=None, **kw):
    words = [span(r) for r in rows_list]
    return ConstantDimensionCode(F2, words[0].n, words[0].k, words, d, **kw)


def test_duplicates_rejected_by_default():
    with pytest.raises(ValueError, match="same subspace"):
        _tiny_code([[[1, 0, 0]], [[1, 0, 0]]])


def test_verify_reports_duplicate():
    code = _tiny_code([[[1, 0, 0]], [[0, 1, 0]], [[1, 0, 0]]], 2, allow_duplicates=True)
    rep = verify_cdc(code)
    assert not rep.ok
    assert rep.violating_pair == (0, 2) and rep.violating_distance == 0
    assert rep.summary() == "FAIL pair=0,2 distance=0"


def test_verify_single_codeword():
    rep = verify_cdc(_tiny_code([[[1, 0, 0]]], 2))
    assert rep.ok and rep.observed_min_distance is None
    assert rep.summary() == "ok min_distance=none"


def test_verify_needs_target():
    with pytest.raises(ValueError):
        verify_cdc(_tiny_code([[[1, 0, 0]], [[0, 1, 0]]]))


def test_verify_q3_generic_path():
    code = lifted_mrd(3, 4, 2, 2)
    rep = verify_cdc(code)
    assert rep.ok and rep.observed_min_distance == 2 and rep.certified


def test_full_verify_limit():
    code = lifted_mrd(2, 8, 4, 2)  # 2^16 words
    with pytest.raises(ValueError, match="force"):
        verify_cdc(code)
    rep = verify_cdc(code, sampling=Sample(2000, seed=5))
    assert rep.ok and not rep.certified and rep.observed_min_distance >= 2


def test_sampling_is_seeded():
    code = lifted_mrd(2, 6, 3, 4)
    a = verify_cdc(code, sampling=Sample(300, seed=11))
    b = verify_cdc(code, sampling=Sample(300, seed=11))
    assert a == b


def test_sampling_refutes_bad_claim():
    code = lifted_mrd(2, 6, 3, 2)
    rep = verify_cdc(code, d=4, sampling=Sample(500, seed=1))
    assert not rep.ok and rep.violating_distance == 2


def test_worker_count_does_not_change_report():
    code = lifted_mrd(2, 7, 3, 4)
    assert verify_cdc(code, workers=1) == verify_cdc(code, workers=3)
    assert verify_cdc(code, d=6, workers=1) == verify_cdc(code, d=6, workers=2)


def test_file_round_trip(tmp_path):
    code = lifted_mrd(3, 4, 2, 2)
    path = tmp_path / "c.txt"
    code.write(path)
    back = ConstantDimensionCode.read(path)
    assert [c.key() for c in back] == [c.key() for c in code]
    assert back.claimed_min_distance == 2 and back.q == 3


def test_file_without_claim(tmp_path):
    code = _tiny_code([[[1, 0, 0]], [[0, 1, 0]]])
    assert code.to_text().startswith("cdc q=2 n=3 k=1 d=- M=2")
    assert parse_code(code.to_text()).claimed_min_distance is None


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("", 1),
        ("nope\n", 1),
        ("cdc q=2 n=3 k=1 d=2 M=1\n1 0 2\n", 2),
        ("cdc q=2 n=3 k=1 d=2 M=1\n1 0\n", 2),
        ("cdc q=2 n=3 k=1 d=2 M=2\n1 0 0\n\n0 x 0\n", 4),
        ("cdc q=2 n=3 k=2 d=2 M=1\n1 0 0\n1 0 0\n", 2),
        ("cdc q=2 n=3 k=2 d=2 M=2\n1 0 0\n0 1 0\n\n1 0 0\n", 5),
    ],
)
def test_malformed_file_reports_line(text, lineno):
    with pytest.raises(CodeFormatError) as err:
        parse_code(text)
    assert err.value.lineno == lineno
    assert f"line {lineno}" in str(err.value)


def test_subspace_generator_must_be_reduced_via_from_matrix():
    M = MatrixOverFq.from_rows(F2, [[1, 1], [0, 1]])
    assert Subspace.from_matrix(M).generator == MatrixOverFq.identity(F2, 2)
