"""Exact scalar arithmetic.

Everything the engine computes with is built from `fractions.Fraction`:

* ``ParamPoly``   -- sparse multivariate polynomials in named parameters,
* ``RationalFunction`` -- reduced quotients of ``ParamPoly``,
* ``AlgebraicScalar``  -- elements of a quadratic extension Q[t]/(t^2+c1*t+c0).

No floating point anywhere; resonant weights are algebraic identities and
are treated as such.  All values are immutable after construction.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class ScalarError(ValueError):
    """Usage error: mismatched variable lists or incompatible extensions."""


def rat(x) -> Fraction:
    """Coerce ints / strings like '3/2' to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ScalarError(f"cannot coerce {x!r} to a rational")


def rat_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# ParamPoly
# ---------------------------------------------------------------------------

class ParamPoly:
    """Polynomial over Q in an ordered tuple of named parameters.

    ``terms`` maps exponent tuples (one slot per variable) to nonzero
    Fractions.  The zero polynomial has an empty term map.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: tuple, terms: dict):
        self.vars = vars
        self.terms = terms
        self._hash = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(vars: tuple, value) -> "ParamPoly":
        value = rat(value)
        zero = (0,) * len(vars)
        return ParamPoly(vars, {zero: value} if value else {})

    @staticmethod
    def var(vars: tuple, name: str) -> "ParamPoly":
        if name not in vars:
            raise ScalarError(f"unknown parameter {name!r} (have {vars})")
        e = tuple(1 if v == name else 0 for v in vars)
        return ParamPoly(vars, {e: ONE})

    @staticmethod
    def from_univariate(var: str, coeffs: Iterable) -> "ParamPoly":
        """coeffs[i] is the coefficient of var**i."""
        terms = {}
        for i, c in enumerate(coeffs):
            c = rat(c)
            if c:
                terms[(i,)] = c
        return ParamPoly((var,), terms)

    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            if other.vars != self.vars:
                raise ScalarError(f"variable lists differ: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.const(self.vars, other)
        return None

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            s = terms.get(e, ZERO) + c
            if s:
                terms[e] = s
            elif e in terms:
                del terms[e]
        return ParamPoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, ZERO) + c1 * c2
                if s:
                    terms[e] = s
                elif e in terms:
                    del terms[e]
        return ParamPoly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = ParamPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(self.vars, other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- structure ----------------------------------------------------------

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return ZERO
        if not self.is_constant():
            raise ScalarError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, idx: int) -> int:
        return max((e[idx] for e in self.terms), default=0)

    def leading_key(self) -> tuple:
        """Lexicographically largest exponent tuple (canonical leading term)."""
        return max(self.terms)

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading_key()]

    def content(self) -> Fraction:
        """Rational content carrying the sign of the leading coefficient."""
        if not self.terms:
            return ZERO
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = _gcd_int(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // _gcd_int(den_lcm, c.denominator)
        cont = Fraction(num_gcd, den_lcm)
        if self.leading_coeff() < 0:
            cont = -cont
        return cont

    def primitive(self) -> "ParamPoly":
        c = self.content()
        if not c or c == 1:
            return self
        inv = 1 / c
        return ParamPoly(self.vars, {e: v * inv for e, v in self.terms.items()})

    def scale(self, q) -> "ParamPoly":
        q = rat(q)
        if not q:
            return ParamPoly(self.vars, {})
        return ParamPoly(self.vars, {e: v * q for e, v in self.terms.items()})

    def derivative(self, idx: int = 0) -> "ParamPoly":
        terms = {}
        for e, c in self.terms.items():
            if e[idx]:
                e2 = e[:idx] + (e[idx] - 1,) + e[idx + 1:]
                s = terms.get(e2, ZERO) + c * e[idx]
                if s:
                    terms[e2] = s
                elif e2 in terms:
                    del terms[e2]
        return ParamPoly(self.vars, terms)

    def evaluate(self, values: dict):
        """Substitute every variable; values are Fractions or AlgebraicScalars."""
        vals = [values[v] for v in self.vars]
        acc = None
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                for _ in range(k):
                    term = term * v
            acc = term if acc is None else acc + term
        if acc is None:
            return ZERO
        return acc

    def subs_partial(self, name: str, value) -> "ParamPoly":
        """Substitute one variable by a rational, dropping it from the list."""
        idx = self.vars.index(name)
        value = rat(value)
        new_vars = self.vars[:idx] + self.vars[idx + 1:]
        terms = {}
        for e, c in self.terms.items():
            e2 = e[:idx] + e[idx + 1:]
            s = terms.get(e2, ZERO) + c * value ** e[idx]
            if s:
                terms[e2] = s
            elif e2 in terms:
                del terms[e2]
        return ParamPoly(new_vars, terms)

    # -- univariate views ---------------------------------------------------

    def dense_coeffs(self) -> list:
        """Coefficient list c[0..deg] for a univariate polynomial."""
        if len(self.vars) != 1:
            raise ScalarError("dense_coeffs needs a univariate polynomial")
        d = self.degree_in(0)
        out = [ZERO] * (d + 1)
        for e, c in self.terms.items():
            out[e[0]] = c
        return out

    def monic(self) -> "ParamPoly":
        lc = self.leading_coeff()
        if lc == 1:
            return self
        inv = 1 / lc
        return ParamPoly(self.vars, {e: c * inv for e, c in self.terms.items()})

    # -- exact division -----------------------------------------------------

    def divexact(self, other: "ParamPoly") -> "ParamPoly":
        """Exact polynomial division; raises if the division is not exact."""
        o = self._coerce(other)
        if not o:
            raise ZeroDivisionError("polynomial division by zero")
        rem = self
        qterms = {}
        lk = o.leading_key()
        lc = o.terms[lk]
        while rem.terms:
            rk = rem.leading_key()
            e = tuple(a - b for a, b in zip(rk, lk))
            if any(x < 0 for x in e):
                raise ScalarError(f"inexact division of {self} by {other}")
            c = rem.terms[rk] / lc
            qterms[e] = c
            rem = rem - ParamPoly(self.vars, {e: c}) * o
        return ParamPoly(self.vars, qterms)

    # -- text ---------------------------------------------------------------

    def text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t), reverse=True):
            c = self.terms[e]
            factors = []
            for v, k in zip(self.vars, e):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            if not factors:
                body = rat_text(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = rat_text(abs(c)) + "*" + "*".join(factors)
            pieces.append(("- " if c < 0 else "+ ") + body)
        out = " ".join(pieces)
        return out[2:] if out.startswith("+ ") else ("-" + out[2:])

    __str__ = text

    def __repr__(self):
        return f"ParamPoly({self.text()!r})"


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def parse_param_poly(text: str, vars: tuple) -> ParamPoly:
    """Parse the canonical scalar text form (sum of rational*monomial terms)."""
    from .superpoly import _Lexer  # shared tokeniser

    lex = _Lexer(text)
    result = _parse_poly_sum(lex, vars)
    if lex.peek()[0] != "end":
        raise ScalarError(f"trailing input at column {lex.peek()[2]} in {text!r}")
    return result


def _parse_poly_sum(lex, vars):
    acc = ParamPoly.const(vars, 0)
    sign = 1
    first = True
    while True:
        kind, val, pos = lex.peek()
        if kind == "end" or kind == "rparen":
            if first:
                raise ScalarError(f"empty expression at column {pos}")
            return acc
        if kind == "op" and val in "+-":
            lex.next()
            sign = 1 if val == "+" else -1
        elif not first:
            raise ScalarError(f"expected + or - at column {pos}")
        acc = acc + _parse_poly_term(lex, vars).scale(sign)
        sign = 1
        first = False


def _parse_poly_term(lex, vars):
    factors = [_parse_poly_factor(lex, vars)]
    while True:
        kind, val, _ = lex.peek()
        if kind == "op" and val == "*":
            lex.next()
            factors.append(_parse_poly_factor(lex, vars))
        else:
            break
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return out


def _parse_poly_factor(lex, vars):
    kind, val, pos = lex.next()
    if kind == "number":
        base = ParamPoly.const(vars, val)
    elif kind == "name":
        base = ParamPoly.var(vars, val)
    elif kind == "lparen":
        base = _parse_poly_sum(lex, vars)
        k2, _, p2 = lex.next()
        if k2 != "rparen":
            raise ScalarError(f"expected ')' at column {p2}")
    else:
        raise ScalarError(f"unexpected token {val!r} at column {pos}")
    kind, val, _ = lex.peek()
    if kind == "op" and val == "^":
        lex.next()
        k2, v2, p2 = lex.next()
        if k2 != "number" or v2.denominator != 1 or v2 < 0:
            raise ScalarError(f"exponent must be a nonnegative integer at column {p2}")
        base = base ** int(v2)
    return base


# ---------------------------------------------------------------------------
# polynomial gcd, roots, factorisation into the supported degrees
# ---------------------------------------------------------------------------

def poly_gcd(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    """Monic gcd.  Univariate inputs go through Euclid; multivariate inputs
    are reduced by content/primitive-part recursion on the first variable."""
    if a.vars != b.vars:
        raise ScalarError("gcd of polynomials over different variable lists")
    if not a.terms:
        return b.monic() if b.terms else b
    if not b.terms:
        return a.monic()
    if len(a.vars) <= 1:
        return _gcd_univariate(a, b)
    return _gcd_multivariate(a, b)


def _gcd_univariate(a, b):
    while b.terms:
        a, b = b, _poly_mod(a, b)
    return a.monic()


def _poly_mod(a, b):
    lk = b.leading_key()
    lc = b.terms[lk]
    rem = a
    while rem.terms and rem.leading_key() >= lk:
        rk = rem.leading_key()
        e = tuple(x - y for x, y in zip(rk, lk))
        if any(x < 0 for x in e):
            break
        c = rem.terms[rk] / lc
        rem = rem - ParamPoly(a.vars, {e: c}) * b
    return rem


def _gcd_multivariate(a, b):
    # view as polynomials in vars[0] with ParamPoly coefficients in the rest
    def split(p):
        sub = p.vars[1:]
        out = {}
        for e, c in p.terms.items():
            out.setdefault(e[0], {})[e[1:]] = c
        return {k: ParamPoly(sub, t) for k, t in out.items()}

    def poly_content(parts):
        g = None
        for q in parts.values():
            g = q if g is None else poly_gcd(g, q)
        return g

    def join(parts, vars):
        terms = {}
        for k, q in parts.items():
            for e, c in q.terms.items():
                terms[(k,) + e] = c
        return ParamPoly(vars, terms)

    pa, pb = split(a), split(b)
    ca, cb = poly_content(pa), poly_content(pb)
    cont = poly_gcd(ca, cb)
    ppa = {k: q.divexact(ca) for k, q in pa.items()}
    ppb = {k: q.divexact(cb) for k, q in pb.items()}

    # pseudo-remainder Euclid on the primitive parts
    def deg(parts):
        return max(parts)

    def pseudo_mod(u, v):
        dv = deg(v)
        lv = v[dv]
        while u and deg(u) >= dv:
            du = deg(u)
            lu = u[du]
            u = {k: q * lv for k, q in u.items()}
            for k, q in v.items():
                shift = k + du - dv
                s = u.get(shift, ParamPoly(q.vars, {})) - q * lu
                if s:
                    u[shift] = s
                elif shift in u:
                    del u[shift]
            # strip content to keep growth down
            if u:
                g = None
                for q in u.values():
                    g = q if g is None else poly_gcd(g, q)
                if g and g.terms != {(0,) * len(g.vars): ONE}:
                    u = {k: q.divexact(g) for k, q in u.items()}
        return u

    u, v = ppa, ppb
    if deg(u) < deg(v):
        u, v = v, u
    while v:
        u, v = v, pseudo_mod(u, v)
    g = poly_content(u)
    u = {k: q.divexact(g) for k, q in u.items()}
    return (join(u, a.vars) * _lift_sub(cont, a.vars)).monic()


def _lift_sub(p: ParamPoly, vars: tuple) -> ParamPoly:
    terms = {(0,) + e: c for e, c in p.terms.items()}
    return ParamPoly(vars, terms)


def squarefree_part(p: ParamPoly) -> ParamPoly:
    if not p.terms or p.total_degree() == 0:
        return p.monic() if p.terms else p
    g = poly_gcd(p, p.derivative(0))
    if g.total_degree() == 0:
        return p.monic()
    return p.divexact(g).monic()


def rational_roots(p: ParamPoly) -> set:
    """All rational roots of a nonzero univariate polynomial."""
    if not p.terms:
        raise ScalarError("rational_roots of the zero polynomial")
    if len(p.vars) != 1:
        raise ScalarError("rational_roots needs a univariate polynomial")
    coeffs = p.dense_coeffs()
    # clear denominators to integer coefficients
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd_int(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    roots = set()
    # strip factors of the variable
    low = 0
    while ints[low] == 0:
        roots.add(ZERO)
        low += 1
    ints = ints[low:]
    if len(ints) <= 1:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])
    for pnum in _divisors(a0):
        for qden in _divisors(an):
            for cand in (Fraction(pnum, qden), Fraction(-pnum, qden)):
                if cand in roots:
                    continue
                acc = ZERO
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    roots.add(cand)
    return roots


def _divisors(m: int):
    out = []
    d = 1
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            if d != m // d:
                out.append(m // d)
        d += 1
    return sorted(out)


def irreducible_factors(p: ParamPoly) -> list:
    """Split a univariate polynomial into monic irreducible factors of degree
    <= 2, multiplicities stripped.  Raises ScalarError if an irreducible
    factor of degree >= 3 remains (outside the supported resonance range)."""
    p = squarefree_part(p)
    if p.total_degree() == 0:
        return []
    factors = []
    for r in sorted(rational_roots(p)):
        lin = ParamPoly.from_univariate(p.vars[0], [-r, 1])
        factors.append(lin)
        while True:
            try:
                q = p.divexact(lin)
            except ScalarError:
                break
            p = q
            if not _is_root(p, r):
                break
    deg = p.total_degree()
    if deg == 0:
        return factors
    if deg == 2:
        return factors + [p.monic()]
    if deg == 4:
        quads = _split_quartic(p.monic())
        if quads is not None:
            return factors + quads
    raise ScalarError(
        f"irreducible factor of degree {deg} in resonance locus: {p.text()}; "
        "only rational and quadratic resonances are supported")


def _is_root(p, r):
    acc = ZERO
    for c in reversed(p.dense_coeffs()):
        acc = acc * r + c
    return acc == 0


def _split_quartic(p: ParamPoly):
    """Try to write a monic rational quartic with no rational roots as a
    product of two monic rational quadratics."""
    e = p.dense_coeffs()  # e0..e4, e4 == 1
    a3, a2, a1, a0 = e[3], e[2], e[1], e[0]
    # (x^2+b x+c)(x^2+d x+f): b+d=a3, c+f+bd=a2, bf+cd=a1, cf=a0
    # resolvent in u=c+f: try all factorisations of a0 scaled to integers
    den = 1
    for c in (a3, a2, a1, a0):
        den = den * c.denominator // _gcd_int(den, c.denominator)
    # brute force over divisor pairs of a0*den^2 within a generous bound
    n0 = a0 * den * den
    if n0.denominator != 1:
        return None
    cands = set()
    for d in _divisors(abs(int(n0))) or [0]:
        cands.add(Fraction(d, den))
        cands.add(Fraction(-d, den))
    for c in cands:
        if not c:
            continue
        f = a0 / c
        rest = a2 - c - f
        # b d = rest, b + d = a3, b f + c d = a1
        disc = a3 * a3 - 4 * rest
        sq = _rat_sqrt(disc)
        if sq is None:
            continue
        for b in ((a3 + sq) / 2, (a3 - sq) / 2):
            d = a3 - b
            if b * f + c * d == a1:
                q1 = ParamPoly.from_univariate(p.vars[0], [c, b, 1])
                q2 = ParamPoly.from_univariate(p.vars[0], [f, d, 1])
                return [q1, q2] if (c, b) <= (f, d) else [q2, q1]
    return None


def _rat_sqrt(q: Fraction):
    if q < 0:
        return None
    num = _int_sqrt(q.numerator)
    den = _int_sqrt(q.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_sqrt(m: int):
    import math
    r = math.isqrt(m)
    return r if r * r == m else None


# ---------------------------------------------------------------------------
# quadratic extensions
# ---------------------------------------------------------------------------

class AlgebraicScalar:
    """Element a + b*t of Q[t]/(t^2 + c1*t + c0), the minimal polynomial
    being irreducible over Q.  t denotes the positive-radical root
    (-c1 + sqrt(c1^2 - 4 c0)) / 2."""

    __slots__ = ("c0", "c1", "a", "b")

    def __init__(self, c0, c1, a, b):
        self.c0 = rat(c0)
        self.c1 = rat(c1)
        self.a = rat(a)
        self.b = rat(b)

    def _check(self, other):
        if (self.c0, self.c1) != (other.c0, other.c1):
            raise ScalarError("mixed quadratic extensions")

    def _coerce(self, other):
        if isinstance(other, AlgebraicScalar):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicScalar(self.c0, self.c1, other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgebraicScalar(self.c0, self.c1, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicScalar(self.c0, self.c1, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (a+bt)(c+dt) with t^2 = -c1 t - c0
        bd = self.b * o.b
        return AlgebraicScalar(
            self.c0, self.c1,
            self.a * o.a - self.c0 * bd,
            self.a * o.b + self.b * o.a - self.c1 * bd)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicScalar":
        # solve (a+bt)(x+yt) = 1
        det = self.a * self.a - self.c1 * self.a * self.b + self.c0 * self.b * self.b
        if not det:
            raise ZeroDivisionError("division by zero in quadratic extension")
        return AlgebraicScalar(self.c0, self.c1,
                               (self.a - self.c1 * self.b) / det, -self.b / det)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conjugate(self) -> "AlgebraicScalar":
        return AlgebraicScalar(self.c0, self.c1, self.a - self.c1 * self.b, -self.b)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, AlgebraicScalar):
            return NotImplemented
        return ((self.c0, self.c1) == (other.c0, other.c1)
                and (self.a, self.b) == (other.a, other.b))

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.c0, self.c1, self.a, self.b))

    def as_rational(self):
        """Collapse to Fraction when the extension coordinate vanishes."""
        return self.a if self.b == 0 else self

    def branch(self):
        """0 if this element is t itself, 1 if it is the conjugate root,
        None otherwise."""
        if (self.a, self.b) == (ZERO, ONE):
            return 0
        if (self.a, self.b) == (-self.c1, Fraction(-1)):
            return 1
        return None

    def to_json(self):
        br = self.branch()
        if br is not None:
            return {"minpoly": [rat_text(self.c0), rat_text(self.c1), "1"],
                    "branch": br}
        return {"minpoly": [rat_text(self.c0), rat_text(self.c1), "1"],
                "coords": [rat_text(self.a), rat_text(self.b)]}

    @staticmethod
    def from_json(d) -> "AlgebraicScalar":
        c0, c1, c2 = (rat(x) for x in d["minpoly"])
        if c2 != 1:
            c0, c1 = c0 / c2, c1 / c2
        if "coords" in d:
            a, b = (rat(x) for x in d["coords"])
            return AlgebraicScalar(c0, c1, a, b)
        if d["branch"] == 0:
            return AlgebraicScalar(c0, c1, 0, 1)
        return AlgebraicScalar(c0, c1, -c1, -1)

    def radical_text(self) -> str:
        """Human-readable form (for Markdown reports only)."""
        disc = self.c1 * self.c1 - 4 * self.c0
        # value = a + b*(-c1 + sqrt(disc))/2, with the radicand cleared to
        # an integer: sqrt(n/d) = sqrt(n*d)/d
        p = self.a - self.b * self.c1 / 2
        q = self.b / 2
        if not q:
            return rat_text(p)
        q = q / disc.denominator
        rad = disc.numerator * disc.denominator
        # pull square factors out of the radicand
        f = 2
        while f * f <= rad:
            while rad % (f * f) == 0:
                rad //= f * f
                q = q * f
            f += 1
        disc = Fraction(rad)
        qs = "" if q == 1 else ("-" if q == -1 else rat_text(q) + "*")
        body = f"{qs}sqrt({rat_text(disc)})"
        if not p:
            return body
        sign = "+" if q > 0 else ""
        return f"{rat_text(p)}{sign}{body}" if q > 0 else f"{rat_text(p)}{body}"

    def __repr__(self):
        return f"AlgebraicScalar({self.radical_text()})"


def quadratic_split(p: ParamPoly):
    """Two conjugate roots of an irreducible rational quadratic, the
    positive-radical branch first."""
    if len(p.vars) != 1 or p.total_degree() != 2:
        raise ScalarError("quadratic_split needs a univariate quadratic")
    coeffs = p.dense_coeffs()
    a, b, c = coeffs[2], coeffs[1], coeffs[0]
    disc = b * b - 4 * a * c
    if _rat_sqrt(disc) is not None:
        raise ScalarError(f"{p.text()} is reducible over Q; use rational_roots")
    c1 = b / a
    c0 = c / a
    root_plus = AlgebraicScalar(c0, c1, 0, 1)
    root_minus = AlgebraicScalar(c0, c1, -c1, -1)
    return root_plus, root_minus


def alg_arith(a: AlgebraicScalar, b: AlgebraicScalar, op: str) -> AlgebraicScalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ScalarError(f"unknown op {op!r}")


def poly_arith(a: ParamPoly, b: ParamPoly, op: str) -> ParamPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ScalarError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# RationalFunction
# ---------------------------------------------------------------------------

class RationalFunction:
    """Reduced quotient of ParamPolys.  The denominator is normalized to
    content 1 with positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num: ParamPoly, den: ParamPoly):
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.vars != den.vars:
            raise ScalarError("numerator/denominator variable lists differ")
        if num:
            g = poly_gcd(num, den)
            if g.total_degree() > 0:
                num = num.divexact(g)
                den = den.divexact(g)
        c = den.content()
        den = den.primitive()
        if c != 1:
            num = num.scale(1 / c)
        self.num = num
        self.den = den

    @staticmethod
    def from_poly(p: ParamPoly) -> "RationalFunction":
        return RationalFunction(p, ParamPoly.const(p.vars, 1))

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, ParamPoly):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.from_poly(ParamPoly.const(self.num.vars, other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def evaluate(self, values: dict):
        d = self.den.evaluate(values)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the given point")
        n = self.num.evaluate(values)
        if isinstance(n, AlgebraicScalar) or isinstance(d, AlgebraicScalar):
            if not isinstance(n, AlgebraicScalar):
                n = AlgebraicScalar(d.c0, d.c1, n, 0)
            return n / d
        return n / d

    def text(self) -> str:
        if self.den.is_constant() and self.den.constant_value() == 1:
            return self.num.text()
        return f"({self.num.text()})/({self.den.text()})"

    __str__ = text

    def __repr__(self):
        return f"RationalFunction({self.text()!r})"
