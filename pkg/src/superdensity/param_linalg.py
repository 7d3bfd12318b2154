"""Exact linear algebra over Q[params]: generic nullspaces by fraction-free
elimination, detection of parameter values where the solution space jumps,
and re-solving at specialized rational or quadratic-algebraic values.

The generic pass keeps a fraction-free row echelon.  A random-evaluation
prefilter decides which incoming rows are worth symbolic work; afterwards
every deduplicated row is verified against the computed nullspace basis
(exact polynomial dot products), so the prefilter can never lose a
constraint.  Resonance candidates are the pivot polynomials plus every
nonconstant content factor removed during elimination: a specialization can
only drop the rank where one of those vanishes, and each candidate root is
confirmed by re-solving over the exact residue field.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .scalars import (AlgebraicScalar, ParamPoly, ScalarError,
                      irreducible_factors, quadratic_split, rational_roots,
                      squarefree_part)


class ParamMatrix:
    """Sparse matrix with ParamPoly entries: rows are {col: ParamPoly}."""

    __slots__ = ("vars", "ncols", "rows")

    def __init__(self, vars: tuple, ncols: int, rows=None):
        self.vars = vars
        self.ncols = ncols
        self.rows = rows if rows is not None else []

    @staticmethod
    def from_dense(vars: tuple, entries) -> "ParamMatrix":
        ncols = len(entries[0]) if entries else 0
        m = ParamMatrix(vars, ncols)
        for row in entries:
            m.add_row({j: e for j, e in enumerate(row) if e})
        return m

    def add_row(self, row: dict):
        if row:
            self.rows.append(row)

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "ncols": self.ncols,
            "rows": [
                {str(j): e.text() for j, e in sorted(r.items())} for r in self.rows
            ],
        }

    @staticmethod
    def from_json(d: dict) -> "ParamMatrix":
        from .scalars import parse_param_poly
        vars = tuple(d["vars"])
        m = ParamMatrix(vars, d["ncols"])
        for r in d["rows"]:
            m.add_row({int(j): parse_param_poly(t, vars) for j, t in r.items()})
        return m


class SolutionSpace:
    __slots__ = ("generic_dimension", "basis", "pivot_polynomials", "ncols",
                 "vars", "core_rows")

    def __init__(self, generic_dimension, basis, pivot_polynomials, ncols,
                 vars, core_rows=None):
        self.generic_dimension = generic_dimension
        self.basis = basis          # list of {col: ParamPoly}, cleared + normalized
        self.pivot_polynomials = pivot_polynomials
        self.ncols = ncols
        self.vars = vars
        # echelon pivot rows: polynomial combinations of the input rows that
        # span the row space wherever no pivot/content factor vanishes
        self.core_rows = core_rows if core_rows is not None else []


class ResonanceReport:
    __slots__ = ("candidate_locus", "confirmed", "rejected")

    def __init__(self, candidate_locus, confirmed, rejected):
        self.candidate_locus = candidate_locus    # square-free ParamPoly
        self.confirmed = confirmed                # [(root, dimension_at_root)]
        self.rejected = rejected                  # roots whose dimension did not jump


def _row_normalize(row: dict):
    """Divide by the rational content and fix the sign of the smallest
    column's leading coefficient.  Polynomial content is deliberately kept:
    a row lambda*v is a weaker constraint than v at lambda=0."""
    if not row:
        return row
    cont = None
    for e in row.values():
        c = e.content()
        cont = c if cont is None else _frac_gcd(cont, c)
    lead = row[min(row)]
    if lead.leading_coeff() < 0:
        cont = -abs(cont)
    else:
        cont = abs(cont)
    if cont == 1:
        return row
    inv = 1 / cont
    return {j: e.scale(inv) for j, e in row.items()}


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    a, b = abs(a), abs(b)
    num = _igcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // _igcd(a.denominator, b.denominator)
    return Fraction(num, den)


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _row_key(row: dict):
    return tuple(sorted((j, tuple(sorted(e.terms.items()))) for j, e in row.items()))


class _Echelon:
    """Incremental fraction-free echelon over ParamPoly rows."""

    def __init__(self, vars):
        self.vars = vars
        self.pivots = []          # list of (col, row dict)
        self.pivot_polys = []     # pivot entries at insertion time
        self.content_factors = [] # nonconstant contents removed during reduction

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        for col, prow in self.pivots:
            c = row.get(col)
            if not c:
                continue
            p = prow[col]
            new = {}
            for j, e in row.items():
                new[j] = e * p
            for j, e in prow.items():
                v = new.get(j)
                v = -(e * c) if v is None else v - e * c
                if v:
                    new[j] = v
                elif j in new:
                    del new[j]
            row = self._strip_content(new)
        return row

    def _strip_content(self, row):
        if not row:
            return row
        row = _row_normalize(row)
        # remove a common polynomial factor, remembering it as a candidate
        g = None
        for e in row.values():
            g = e if g is None else _pgcd(g, e)
            if g.total_degree() == 0:
                return row
        if g is not None and g.total_degree() > 0:
            self.content_factors.append(g)
            row = {j: e.divexact(g) for j, e in row.items()}
            row = _row_normalize(row)
        return row

    def insert(self, row: dict) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        col = min(row, key=lambda j: (row[j].total_degree(), j))
        # keep the echelon Jordan-reduced: eliminate col from existing rows
        p = row[col]
        for i, (pcol, prow) in enumerate(self.pivots):
            c = prow.get(col)
            if not c:
                continue
            new = {j: e * p for j, e in prow.items()}
            for j, e in row.items():
                v = new.get(j)
                t = e * c
                v = -t if v is None else v - t
                if v:
                    new[j] = v
                elif j in new:
                    del new[j]
            self.pivots[i] = (pcol, self._strip_content(new))
        self.pivots.append((col, row))
        self.pivot_polys.append(p)
        self.pivots.sort(key=lambda cr: cr[0])
        return True

    def pivot_cols(self):
        return [c for c, _ in self.pivots]

    def nullspace(self, ncols: int):
        """Back substitution on the Jordan-reduced echelon; vectors cleared
        to primitive ParamPoly entries, first nonzero coordinate positive.
        Pivot rows touch only their own pivot column plus free columns, so
        each free column yields one vector directly."""
        pset = set(self.pivot_cols())
        free = [j for j in range(ncols) if j not in pset]
        basis = []
        rows = {c: r for c, r in self.pivots}
        one = ParamPoly.const(self.vars, 1)
        for f in free:
            vec = {f: one}
            denom = one
            for col, prow in rows.items():
                e = prow.get(f)
                if e:
                    # p * v_col + e * v_f = 0 with v_f carried at `denom`
                    p = prow[col]
                    g = _pgcd(p, e)
                    if g.total_degree() > 0:
                        p2, e2 = p.divexact(g), e.divexact(g)
                    else:
                        p2, e2 = p, e
                    if not (p2.is_constant()):
                        vec = {j: v * p2 for j, v in vec.items()}
                        denom = denom * p2
                        vec[col] = -e2 * denom.divexact(p2)
                    else:
                        inv = 1 / p2.constant_value()
                        vec[col] = (-e2).scale(inv) * denom
            # clear to primitive
            g = None
            for v in vec.values():
                g = v if g is None else _pgcd(g, v)
                if g.total_degree() == 0:
                    g = None
                    break
            if g is not None and g.total_degree() > 0:
                vec = {j: v.divexact(g) for j, v in vec.items()}
            vec = _row_normalize({j: v for j, v in vec.items() if v})
            basis.append(vec)
        return basis


def _pgcd(a, b):
    from .scalars import poly_gcd
    return poly_gcd(a, b)


def _dot(row: dict, vec: dict):
    acc = None
    for j, e in row.items():
        v = vec.get(j)
        if v:
            t = e * v
            acc = t if acc is None else acc + t
    return acc


def generic_nullspace(m: ParamMatrix, seed: int = 2) -> SolutionSpace:
    """Nullspace over the fraction field Q(params).

    Soundness: every deduplicated row annihilates every returned basis
    vector, identically in the parameters; rows that the prefilter skipped
    are verified and promoted if the verification fails.
    """
    rng = random.Random(seed)
    point = {v: Fraction(rng.randint(10 ** 4, 10 ** 5), rng.randint(1, 99) * 2 + 1)
             for v in m.vars}
    unique = {}
    for row in m.rows:
        row = _row_normalize(row)
        if row:
            unique.setdefault(_row_key(row), row)
    rows = list(unique.values())

    ech = _Echelon(m.vars)
    num_pivots = []   # numeric echelon: (col, {col: Fraction})
    deferred = []

    def numeric_insert(nrow):
        for col, prow in num_pivots:
            c = nrow.get(col)
            if not c:
                continue
            for j, e in prow.items():
                v = nrow.get(j, ZERO_F) - e * c
                if v:
                    nrow[j] = v
                elif j in nrow:
                    del nrow[j]
        if not nrow:
            return False
        col = min(nrow)
        inv = 1 / nrow[col]
        nrow = {j: v * inv for j, v in nrow.items()}
        num_pivots.append((col, nrow))
        return True

    ZERO_F = Fraction(0)
    for row in rows:
        nrow = {j: e.evaluate(point) for j, e in row.items()}
        nrow = {j: v for j, v in nrow.items() if v}
        if numeric_insert(nrow):
            ech.insert(row)
        else:
            deferred.append(row)

    while True:
        basis = ech.nullspace(m.ncols)
        bad = None
        for row in rows:
            for vec in basis:
                if _dot(row, vec):
                    bad = row
                    break
            if bad:
                break
        if bad is None:
            break
        ech.insert(bad)

    return SolutionSpace(m.ncols - len(ech.pivots), basis,
                         list(ech.pivot_polys) + list(ech.content_factors),
                         m.ncols, m.vars, core_rows=[r for _, r in ech.pivots])


def resonance_candidates(s: SolutionSpace) -> ParamPoly:
    """Square-free product of the nonconstant factors of the pivot
    polynomials (single-parameter systems only)."""
    if len(s.vars) != 1:
        raise ScalarError("resonance analysis needs a single-parameter system; fix tau first")
    prod = ParamPoly.const(s.vars, 1)
    for p in s.pivot_polynomials:
        sf = squarefree_part(p)
        if sf.total_degree() == 0:
            continue
        from .scalars import poly_gcd
        g = poly_gcd(prod, sf)
        extra = sf.divexact(g) if g.total_degree() > 0 else sf
        if extra.total_degree() > 0:
            prod = prod * extra
    return squarefree_part(prod)


def candidate_roots(locus: ParamPoly):
    """Exact roots of the candidate locus: rationals plus quadratic pairs.
    Degree >= 3 irreducible factors raise (outside the supported range)."""
    if locus.total_degree() == 0:
        return []
    roots = []
    for f in irreducible_factors(locus):
        if f.total_degree() == 1:
            roots.extend(sorted(rational_roots(f)))
        else:
            r1, r2 = quadratic_split(f)
            roots.extend([r1, r2])
    return roots


def specialize_rows(rows, var: str, value):
    """Evaluate ParamPoly rows at a rational or algebraic value."""
    out = []
    for row in rows:
        r = {}
        for j, e in row.items():
            v = e.evaluate({var: value})
            if v:
                r[j] = v
        out.append(r)
    return out


def field_nullspace(rows, ncols: int, max_rank=None):
    """Gaussian elimination over an exact field (Fraction or
    AlgebraicScalar).  Returns (dimension, basis as dicts).  Stops scanning
    once max_rank pivots are found (specialized rank never exceeds the
    generic one)."""
    pivots = []
    for row in rows:
        r = dict(row)
        for col, prow in pivots:
            c = r.get(col)
            if not c:
                continue
            for j, e in prow.items():
                v = r.get(j)
                v = -(e * c) if v is None else v - e * c
                if v:
                    r[j] = v
                elif j in r:
                    del r[j]
        if r:
            col = min(r)
            inv = _field_inv(r[col])
            r = {j: v * inv for j, v in r.items()}
            pivots.append((col, r))
            if max_rank is not None and len(pivots) >= max_rank:
                break
    pivots.sort(key=lambda cr: cr[0])
    pset = {c for c, _ in pivots}
    rows_by_col = {c: r for c, r in pivots}
    basis = []
    for f in range(ncols):
        if f in pset:
            continue
        vec = {f: _ONE}
        for col in sorted(pset, reverse=True):
            prow = rows_by_col[col]
            acc = None
            for j, e in prow.items():
                if j == col:
                    continue
                v = vec.get(j)
                if v is not None:
                    t = e * v
                    acc = t if acc is None else acc + t
            if acc is not None and acc:
                vec[col] = -acc
        basis.append(vec)
    return len(basis), basis


_ONE = Fraction(1)


def _field_inv(x):
    if isinstance(x, Fraction):
        return 1 / x
    return x.inverse()


def field_rank(rows, max_rank=None) -> int:
    pivots = []
    for row in rows:
        r = dict(row)
        for col, prow in pivots:
            c = r.get(col)
            if not c:
                continue
            for j, e in prow.items():
                v = r.get(j)
                v = -(e * c) if v is None else v - e * c
                if v:
                    r[j] = v
                elif j in r:
                    del r[j]
        if r:
            col = min(r)
            inv = _field_inv(r[col])
            pivots.append((col, {j: v * inv for j, v in r.items()}))
            if max_rank is not None and len(pivots) >= max_rank:
                break
    return len(pivots)


def specialize_and_solve(m: ParamMatrix, value, var: str = None):
    """Exact nullspace of the matrix specialized at a rational or quadratic
    algebraic parameter value: (dimension, basis)."""
    if len(m.vars) != 1 and var is None:
        raise ScalarError("specialize_and_solve needs the parameter name for multi-parameter matrices")
    var = var if var is not None else m.vars[0]
    rows = specialize_rows(m.rows, var, value)
    return field_nullspace(rows, m.ncols)


def analyze_resonances(m: ParamMatrix, sol: SolutionSpace) -> ResonanceReport:
    """Confirm-by-specialization for every root of the candidate locus."""
    locus = resonance_candidates(sol)
    confirmed, rejected = [], []
    for root in candidate_roots(locus):
        dim, _ = specialize_and_solve(m, root)
        if dim > sol.generic_dimension:
            confirmed.append((root, dim))
        else:
            rejected.append(root)
    return ResonanceReport(locus, confirmed, rejected)
