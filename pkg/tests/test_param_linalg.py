import json
import random
from fractions import Fraction

import pytest

from superdensity.param_linalg import (ParamMatrix, analyze_resonances,
                                       candidate_roots, field_nullspace,
                                       generic_nullspace,
                                       resonance_candidates,
                                       specialize_and_solve)
from superdensity.scalars import (AlgebraicScalar, ParamPoly, ScalarError,
                                  parse_param_poly)

L = ("l",)


def P(text):
    return parse_param_poly(text, L)


def dense(rows):
    return ParamMatrix.from_dense(L, [[P(e) for e in row] for row in rows])


def test_generic_nullspace_examples():
    m = dense([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
    assert generic_nullspace(m).generic_dimension == 0
    m = dense([["l"]])
    sol = generic_nullspace(m)
    assert sol.generic_dimension == 0
    assert any(p == P("l") for p in sol.pivot_polynomials)
    # rows proportional: rank 1
    m = dense([["l", "1"], ["l^2", "l"]])
    sol = generic_nullspace(m)
    assert sol.generic_dimension == 1
    # oracle: specialization at 5 random rationals
    rng = random.Random(4)
    for _ in range(5):
        v = Fraction(rng.randint(2, 60), rng.randint(1, 9))
        dim, _ = specialize_and_solve(m, v)
        assert dim == 1


def test_nullspace_soundness():
    rng = random.Random(8)
    for _ in range(25):
        rows = []
        for _ in range(rng.randint(1, 6)):
            rows.append([P(str(rng.randint(-3, 3))) + P("l").scale(rng.randint(-2, 2))
                         for _ in range(4)])
        m = ParamMatrix.from_dense(L, rows)
        sol = generic_nullspace(m)
        for vec in sol.basis:
            for row in m.rows:
                acc = None
                for j, e in row.items():
                    v = vec.get(j)
                    if v:
                        t = e * v
                        acc = t if acc is None else acc + t
                assert acc is None or not acc


def test_resonance_candidates_examples():
    sol = generic_nullspace(dense([["1", "0"], ["0", "l"]]))
    assert resonance_candidates(sol) == P("l")
    sol = generic_nullspace(dense([["l^2+4*l"]]))
    assert resonance_candidates(sol) == P("l^2+4*l")
    sol = generic_nullspace(dense([["2*l^2+10*l+3"]]))
    # square-free already; oracle gcd(p, p') = 1
    from superdensity.scalars import poly_gcd
    p = P("2*l^2+10*l+3")
    assert poly_gcd(p, p.derivative(0)).total_degree() == 0
    assert resonance_candidates(sol) == p.monic()


def test_resonance_candidates_rejects_multiparameter():
    m = ParamMatrix(("t", "l"), 1)
    m.add_row({0: ParamPoly.var(("t", "l"), "t")})
    with pytest.raises(ScalarError):
        resonance_candidates(generic_nullspace(m))


def test_specialize_and_solve_examples():
    m = dense([["l"]])
    assert specialize_and_solve(m, Fraction(0))[0] == 1
    assert specialize_and_solve(m, Fraction(1))[0] == 0
    # 2x2 witness with pivot 2l^2+10l+3: dimension jumps at the root
    m = dense([["2*l^2+10*l+3", "0"], ["0", "1"]])
    sol = generic_nullspace(m)
    assert sol.generic_dimension == 0
    root_plus, root_minus = candidate_roots(P("2*l^2+10*l+3"))[:2]
    for root in (root_plus, root_minus):
        dim, basis = specialize_and_solve(m, root)
        assert dim == 1
        # exact check in the extension: M(root) . v = 0
        for vec in basis:
            for row in m.rows:
                acc = None
                for j, e in row.items():
                    v = vec.get(j)
                    if v is not None and v:
                        t = e.evaluate({"l": root}) * v
                        acc = t if acc is None else acc + t
            assert acc is None or not acc


def test_analyze_resonances_confirms_and_prunes():
    # candidate l can appear among the pivots, but the rank holds at l = 0
    m = dense([["l", "1"], ["1", "0"]])
    sol = generic_nullspace(m)
    rep = analyze_resonances(m, sol)
    assert rep.confirmed == []
    # genuine resonance at l = 0
    m = dense([["l", "0"], ["0", "1"]])
    sol = generic_nullspace(m)
    rep = analyze_resonances(m, sol)
    assert [(r, d) for r, d in rep.confirmed] == [(Fraction(0), 1)]


def test_specialization_consistency_random():
    rng = random.Random(3)
    rows = [["l", "1", "0"], ["0", "l", "1"], ["l^2", "2*l", "1"]]
    m = dense(rows)
    sol = generic_nullspace(m)
    locus = resonance_candidates(sol)
    for _ in range(10):
        v = Fraction(rng.randint(1, 99), rng.randint(1, 7))
        if locus.evaluate({"l": v}) == 0:
            continue
        assert specialize_and_solve(m, v)[0] == sol.generic_dimension


def test_fraction_free_never_divides_by_zero_poly():
    # a matrix whose naive pivoting hits cancellations
    m = dense([["l", "l^2", "1"],
               ["1", "l", "0"],
               ["0", "0", "l-1"],
               ["l", "l^2", "l"]])
    sol = generic_nullspace(m)
    assert sol.generic_dimension + (3 - sol.generic_dimension) == 3
    for vec in sol.basis:
        for row in m.rows:
            acc = None
            for j, e in row.items():
                v = vec.get(j)
                if v:
                    t = e * v
                    acc = t if acc is None else acc + t
            assert acc is None or not acc


def test_matrix_json_roundtrip():
    m = dense([["l", "1"], ["l^2", "l"], ["0", "2/3"]])
    blob = json.dumps(m.to_json(), sort_keys=True)
    back = ParamMatrix.from_json(json.loads(blob))
    assert back.ncols == m.ncols and back.vars == m.vars
    assert [sorted((j, e.text()) for j, e in r.items()) for r in back.rows] == \
           [sorted((j, e.text()) for j, e in r.items()) for r in m.rows]


def test_field_nullspace_quadratic_field():
    # elimination over Q[t]/(t^2 - 19)
    s = AlgebraicScalar(-19, 0, 0, 1)
    rows = [{0: s, 1: Fraction(1)}, {0: Fraction(19), 1: s}]
    dim, basis = field_nullspace(rows, 2)
    assert dim == 1
    v = basis[0]
    for row in rows:
        acc = None
        for j, e in row.items():
            if j in v and v[j]:
                t = e * v[j]
                acc = t if acc is None else acc + t
        assert acc is None or not acc
