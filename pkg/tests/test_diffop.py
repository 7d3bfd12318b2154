import json
import random
from fractions import Fraction

from superdensity.densities import Density
from superdensity.diffop import (BiDiffOp, LinDiffOp, act_on_bi, act_on_lin,
                                 apply_bi, apply_bi_poly, apply_lin,
                                 bi_L_hat, bi_from_json, bi_left_compose,
                                 bi_slot1_compose, bi_slot1_partial,
                                 bi_slot2_compose, bi_to_json,
                                 coboundary_of_lin, compose_lin,
                                 decompose_psi, lift_generator,
                                 lift_hamiltonian, normal_order, parity_swap,
                                 phi_decompose, phi_reassemble, psi_lift,
                                 psi_apply, psi_component_action, PSI_ROUTES)
from superdensity.scalars import ParamPoly
from superdensity.superpoly import SuperPoly, all_monomials, parse_superpoly

L = ("l",)
LAM = ParamPoly.var(L, "l")


def C(q):
    return ParamPoly.const(L, q)


def sp(text, n):
    return parse_superpoly(text, n)


def test_apply_lin_examples():
    dx = LinDiffOp.word(0, k=1, **{})
    d = Density(sp("x^3", 0), LAM)
    out = apply_lin(LinDiffOp(0, dx.terms, lam=LAM, mu=LAM + C(1)), d)
    assert out.payload == sp("3*x^2", 0)
    assert out.weight == LAM + C(1)
    e1 = LinDiffOp.word(1, eps=1)
    assert e1.apply_poly(sp("t1", 1)) == SuperPoly.const(1, 1)
    # eta1 eta2 on t2*t1, oracle: two sequential eta calls
    w = LinDiffOp.word(2, eps=3)
    p = sp("t2*t1", 2)
    assert w.apply_poly(p) == p.eta(2).eta(1)


def test_normal_order_examples():
    assert normal_order(["e1", "e1"], 1) == LinDiffOp.word(1, k=1, coeff=-1)
    dx_x = normal_order(["dx", "x"], 1)
    assert dx_x == LinDiffOp(1, {(1, 0, 1, 0): Fraction(1), (0, 0, 0, 0): Fraction(1)})
    # eta1 o theta1 = 1 - theta1 eta1, checked on all monomials x^a theta^S, a <= 3
    e1t1 = normal_order(["e1", "t1"], 1)
    want = LinDiffOp(1, {(0, 0, 0, 0): Fraction(1), (0, 1, 0, 1): Fraction(-1)})
    assert e1t1 == want
    t1 = sp("t1", 1)
    for p in all_monomials(1, 3):
        assert e1t1.apply_poly(p) == (t1 * p).eta(1)
    # remaining rewrite rules
    assert normal_order(["e1", "x"], 1) == LinDiffOp(
        1, {(1, 0, 0, 1): Fraction(1), (0, 1, 0, 0): Fraction(-1)})
    assert normal_order(["e1", "t2"], 2) == LinDiffOp(
        2, {(0, 2, 0, 1): Fraction(-1)})
    assert normal_order(["e1", "e2"], 2) == -normal_order(["e2", "e1"], 2)
    assert normal_order(["dx", "t1"], 1) == LinDiffOp(1, {(0, 1, 1, 0): Fraction(1)})


def test_normal_order_soundness_exhaustive():
    # every formal word of length <= 3 over the generators agrees with
    # sequential application on all monomials (n = 2, x-degree <= 4)
    rng = random.Random(0)
    gens = ["x", "dx", "t1", "t2", "e1", "e2"]
    monos = all_monomials(2, 4)

    def apply_token(tok, p):
        if tok == "x":
            return SuperPoly.x(2) * p
        if tok == "dx":
            return p.d_x()
        if tok.startswith("t"):
            return SuperPoly.theta(2, int(tok[1])) * p
        return p.eta(int(tok[1]))

    words = [[a] for a in gens] + [[a, b] for a in gens for b in gens]
    words += [[a, b, c] for a in gens for b in gens for c in gens]
    words += [[gens[rng.randrange(6)] for _ in range(4)] for _ in range(120)]
    for word in words:
        op = normal_order(word, 2)
        for p in monos:
            want = p
            for tok in reversed(word):
                want = apply_token(tok, want)
            assert op.apply_poly(p) == want, word


def test_compose_lin_oracle_random():
    rng = random.Random(11)
    monos = all_monomials(2, 4)
    for _ in range(150):
        a = LinDiffOp(2, {(rng.randint(0, 2), rng.randint(0, 3),
                           rng.randint(0, 2), rng.randint(0, 3)): Fraction(rng.randint(-3, 3) or 1)})
        b = LinDiffOp(2, {(rng.randint(0, 2), rng.randint(0, 3),
                           rng.randint(0, 2), rng.randint(0, 3)): Fraction(rng.randint(-3, 3) or 1)})
        c = compose_lin(a, b)
        for p in monos[:12]:
            assert c.apply_poly(p) == a.apply_poly(b.apply_poly(p))


def test_lift_generator_table_and_oracle():
    from superdensity.densities import act
    for n in (1, 2):
        gens = [SuperPoly.const(n, 1), SuperPoly.x(n)]
        gens += [SuperPoly.theta(n, i) for i in range(1, n + 1)]
        if n == 2:
            gens.append(sp("t1*t2", 2))
        for h in gens:
            op = lift_generator(h, LAM)
            assert op == lift_hamiltonian(h, LAM, n)
            for p in all_monomials(n, 3):
                assert op.apply_poly(p) == act(LAM, h, Density(p, LAM)).payload
    # closed forms
    assert lift_generator(SuperPoly.const(0, 1), LAM) == LinDiffOp.word(0, k=1)
    lx = lift_generator(SuperPoly.x(1), LAM)
    assert lx.terms[(0, 0, 0, 0)] == LAM
    lt = lift_generator(SuperPoly.theta(1, 1), LAM)
    assert lt == LinDiffOp(1, {(0, 1, 1, 0): Fraction(1), (0, 0, 0, 1): Fraction(1, 2)})


def test_act_on_lin_examples():
    # H = 1, A = dx, lam = mu -> 0
    assert not act_on_lin(SuperPoly.const(0, 1), LinDiffOp.word(0, k=1), LAM, LAM)
    # H = x, A = dx^k: X_x . A = (mu - lam - k) dx^k
    for k in (1, 2, 3):
        a = LinDiffOp.word(0, k=k)
        out = act_on_lin(SuperPoly.x(0), a, LAM, LAM + C(k))
        assert not out
        out = act_on_lin(SuperPoly.x(0), a, LAM, LAM)
        assert out == a.scale(C(-k))
    # H = theta1, A = id, mu = lam -> 0
    assert not act_on_lin(SuperPoly.theta(1, 1), LinDiffOp.identity(1), LAM, LAM)


def test_representation_on_operators():
    # act([F,G]) = act(F) act(G) -+ act(G) act(F) on random operators
    from superdensity.contact import contact_bracket, SubalgebraSpec, generators
    rng = random.Random(5)
    n = 2
    gens = generators(SubalgebraSpec("aff", n))
    mu = LAM + C(Fraction(3, 2))
    for _ in range(20):
        a = LinDiffOp(n, {(0, rng.randint(0, 3), rng.randint(0, 1),
                           rng.randint(0, 3)): Fraction(rng.randint(1, 3))})
        ap = a.parity()
        if ap is None:
            continue
        for f in gens:
            fp = f.parity()
            for g in gens:
                gp = g.parity()
                br = contact_bracket(f, g)
                lhs = LinDiffOp.zero(n)
                for part in br.homogeneous_parts():
                    lhs = lhs + act_on_lin(part, a, LAM, mu)
                t1 = act_on_lin(f, act_on_lin(g, a, LAM, mu), LAM, mu)
                t2 = act_on_lin(g, act_on_lin(f, a, LAM, mu), LAM, mu)
                sign = -1 if fp and gp else 1
                assert lhs == t1 - (t2 if sign > 0 else -t2)


def test_apply_bi_examples():
    # J0(F,G) = FG
    j0 = BiDiffOp.term(1)
    assert apply_bi_poly(j0, sp("t1", 1), sp("x", 1)) == sp("x*t1", 1)
    # eta(F) eta(G) term on (t1, t1): (-1)^{|t1|} * 1 * 1 = -1
    j = BiDiffOp.term(1, e1=1, e2=1)
    assert apply_bi_poly(j, sp("t1", 1), sp("t1", 1)) == SuperPoly.const(1, -1)
    # linearity: J(0, d2) = 0
    assert not apply_bi_poly(j, SuperPoly.zero(1), sp("x", 1))


def test_apply_bi_koszul_sign_rule():
    # sign flips exactly when both the slot-2 word and the first density are odd
    n = 1
    d_odd = Density(sp("t1", 1), C(-1))
    d_even = Density(sp("x", 1), C(-1))
    g = Density(sp("x*t1", 1), LAM)
    odd2 = BiDiffOp(n, {(0, 0, 0, 0, 0, 1): Fraction(1)}, tau=C(-1), lam=LAM)
    even2 = BiDiffOp(n, {(0, 0, 0, 0, 1, 0): Fraction(1)}, tau=C(-1), lam=LAM)
    # compare against the raw unsigned product
    raw_odd = d_odd.payload * g.payload.eta(1)
    assert apply_bi(odd2, d_odd, g).payload == -raw_odd
    raw_even = d_even.payload * g.payload.eta(1)
    assert apply_bi(even2 if False else odd2, d_even, g).payload == raw_even
    assert apply_bi(even2, d_odd, g).payload == d_odd.payload * g.payload.d_x()
    # Pi flag on the first slot flips the effective parity
    d_odd_pi = Density(sp("t1", 1), C(-1), pi_flag=True)
    assert apply_bi(odd2, d_odd_pi, g).payload == raw_odd


def test_bi_L_hat_is_the_density_action():
    from superdensity.densities import act
    for n in (1, 2):
        lhat = bi_L_hat(LAM, n)
        for f in all_monomials(n, 2):
            for d in all_monomials(n, 2):
                want = act(LAM, f, Density(d, LAM)).payload
                assert apply_bi_poly(lhat, f, d) == want


def test_slot_compositions_oracles():
    rng = random.Random(23)
    n = 2
    monos = all_monomials(n, 2)
    for _ in range(40):
        j = BiDiffOp(n, {(rng.randint(0, 1), rng.randint(0, 3),
                          rng.randint(0, 1), rng.randint(0, 3),
                          rng.randint(0, 1), rng.randint(0, 3)): Fraction(rng.randint(1, 3))})
        op = LinDiffOp(n, {(rng.randint(0, 1), rng.randint(0, 3),
                            rng.randint(0, 1), rng.randint(0, 3)): Fraction(rng.randint(1, 3))})
        lp = op.parity()
        jl = bi_left_compose(op, j)
        j1 = bi_slot1_compose(j, op)
        j2 = bi_slot2_compose(j, op)
        for f in monos[:8]:
            for d in monos[:8]:
                assert apply_bi_poly(jl, f, d) == op.apply_poly(apply_bi_poly(j, f, d))
                assert apply_bi_poly(j1, f, d) == apply_bi_poly(j, op.apply_poly(f), d)
                want = apply_bi_poly(j, f, op.apply_poly(d))
                if lp and f.parity():
                    want = -want
                assert apply_bi_poly(j2, f, d) == want


def test_act_on_bi_examples():
    tau = ParamPoly.var(("t", "l"), "t")
    lam = ParamPoly.var(("t", "l"), "l")
    # H = 1, J = FG, mu = tau + lam -> 0
    j0 = BiDiffOp.term(1)
    assert not act_on_bi(SuperPoly.const(1, 1), j0, tau, lam, tau + lam)
    # H = x, shift-k term with mu != tau+lam+k scales by (mu-tau-lam-k)
    j = BiDiffOp.term(1, k1=1)  # shift 1
    out = act_on_bi(SuperPoly.x(1), j, tau, lam, tau + lam)
    assert out == j.scale(ParamPoly.const(("t", "l"), -1))
    # H = theta1, J = J0 -> 0 (FG is invariant)
    assert not act_on_bi(SuperPoly.theta(1, 1), j0, tau, lam, tau + lam)


def test_coboundary_examples():
    # lam = mu, A = identity -> delta A = 0
    assert not coboundary_of_lin(LinDiffOp.identity(1), LAM, LAM)
    # n = 0, shift 2, A = dx^2: delta A != 0, matches the hand expansion
    da = coboundary_of_lin(LinDiffOp.word(0, k=2), LAM, LAM + C(2))
    assert da
    # oracle: delta A (X_F)(f) = (-1)^{|F||A|}[L^mu(A f) - A(L^lam f)]
    from superdensity.densities import act
    for f in all_monomials(0, 4):
        for d in all_monomials(0, 4):
            lhs = apply_bi_poly(da, f, d)
            t0 = act(LAM + C(2), f, Density(d.d_x().d_x(), LAM + C(2))).payload
            t1 = act(LAM, f, Density(d, LAM)).payload.d_x().d_x()
            assert lhs == t0 - t1


def test_parity_swap():
    j = BiDiffOp.term(1, e1=1, coeff=2)
    sw = parity_swap(j)
    assert sw.sigma1 and sw.sigma2 and sw.pi_out
    # applied twice -> identity on the nose under this convention
    assert parity_swap(sw) == j
    # value semantics: sw(F,G) = (-1)^{|F|+|G|} j(F,G)
    for f in all_monomials(1, 2):
        for g in all_monomials(1, 2):
            sign = (-1) ** ((f.parity() or 0) + (g.parity() or 0))
            want = apply_bi_poly(j, f, g)
            assert apply_bi_poly(sw, f, g) == (want if sign > 0 else -want)


def test_parity_swap_equivariance():
    # od(X_H . A) = X_H .Pi od(A) checked by evaluation
    from superdensity.contact import SubalgebraSpec, generators
    rng = random.Random(9)
    n = 1
    tau = ParamPoly.var(("t", "l"), "t")
    lam = ParamPoly.var(("t", "l"), "l")
    mu = tau + lam + ParamPoly.const(("t", "l"), 1)
    monos = all_monomials(n, 2)
    for _ in range(10):
        key = (0, rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 1),
               rng.randint(0, 1), rng.randint(0, 1))
        j = BiDiffOp(n, {key: Fraction(1)})
        jp = j.parity()
        for h in generators(SubalgebraSpec("aff", n)):
            hp = h.parity()
            acted = act_on_bi(h, j, tau, lam, mu)
            lhs = parity_swap(acted)
            # Pi-twisted action on the swapped operator, by evaluation:
            # X.Pi B = L^mu o B - (-1)^{(|B|+1)|H|} B o Leibniz
            sw = parity_swap(j)
            for f in monos[:6]:
                for d in monos[:6]:
                    t0 = lift_hamiltonian(h, mu, n).apply_poly(apply_bi_poly(sw, f, d))
                    t1 = apply_bi_poly(sw, lift_hamiltonian(h, tau, n).apply_poly(f), d)
                    t2 = apply_bi_poly(sw, f, lift_hamiltonian(h, lam, n).apply_poly(d))
                    if hp and f.parity():
                        t2 = -t2
                    rest = t1 + t2
                    sgn = -1 if (hp and ((jp + 1) & 1)) else 1
                    want = t0 - (rest if sgn > 0 else -rest)
                    assert apply_bi_poly(lhs, f, d) == want


def test_phi_decompose_examples_and_roundtrip():
    n = 2
    ident = LinDiffOp.identity(n)
    b11, b22, b21, b12 = phi_decompose(ident)
    assert b11 == LinDiffOp.identity(1) and b22 == LinDiffOp.identity(1)
    assert not b21 and not b12
    dx = LinDiffOp.word(n, k=1)
    b11, b22, b21, b12 = phi_decompose(dx)
    assert b11 == LinDiffOp.word(1, k=1) and b22 == LinDiffOp.word(1, k=1)
    assert not b21 and not b12
    en = LinDiffOp.word(n, eps=2)
    b11, b22, b21, b12 = phi_decompose(en)
    assert not b11 and not b22
    assert b21 and b12            # off-diagonal only
    rng = random.Random(31)
    for _ in range(60):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            terms[(rng.randint(0, 1), rng.randint(0, 3), rng.randint(0, 2),
                   rng.randint(0, 3))] = Fraction(rng.randint(-3, 3) or 1)
        a = LinDiffOp(n, terms)
        blocks = phi_decompose(a)
        for p in all_monomials(n, 3):
            assert phi_reassemble(blocks, n, p) == a.apply_poly(p)


def test_psi_lift_examples_and_roundtrip():
    n = 1
    zero = BiDiffOp(0, {})
    assert not psi_lift(tuple(zero for _ in range(8)), n)
    mult = BiDiffOp.term(0)
    comps = tuple(mult if i == 0 else zero for i in range(8))
    j = psi_lift(comps, n)
    # multiplication restricted to theta_n-free arguments
    assert apply_bi_poly(j, sp("x", 1), sp("x^2", 1)) == sp("x^3", 1)
    assert not apply_bi_poly(j, sp("t1", 1), sp("x", 1))
    rng = random.Random(13)
    for _ in range(10):
        comps = []
        for _ in range(8):
            terms = {}
            for _ in range(rng.randint(1, 2)):
                terms[(rng.randint(0, 1), 0, rng.randint(0, 2), 0,
                       rng.randint(0, 2), 0)] = Fraction(rng.randint(-2, 2) or 1)
            comps.append(BiDiffOp(0, terms))
        j = psi_lift(tuple(comps), n)
        back = decompose_psi(j)
        assert all(c1.terms == c2.terms for c1, c2 in zip(comps, back))


def test_psi_equivariance():
    from superdensity.contact import SubalgebraSpec, generators
    rng = random.Random(17)
    V = ("t", "l")
    tau = ParamPoly.var(V, "t")
    lam = ParamPoly.var(V, "l")
    half = ParamPoly.const(V, Fraction(1, 2))
    zero = ParamPoly.const(V, 0)
    n = 2
    mu = tau + lam + ParamPoly.const(V, Fraction(3, 2))
    weights = []
    for (s1, s2, so) in PSI_ROUTES:
        weights.append((tau + (half if s1 == 2 else zero),
                        lam + (half if s2 == 2 else zero),
                        mu + (half if so == 2 else zero)))
    gens = generators(SubalgebraSpec("aff", n, excluded=n))
    for trial in range(6):
        par = trial % 2

        def rnd(parity):
            while True:
                key = (rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 1),
                       rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 1))
                a, s, k1, e1, k2, e2 = key
                if (bin(s).count("1") + bin(e1).count("1") + bin(e2).count("1")) % 2 == parity:
                    return BiDiffOp(1, {key: Fraction(rng.randint(-2, 2) or 1)})

        comps = tuple(rnd(par) if i < 4 else rnd(par ^ 1) for i in range(8))
        j = psi_lift(comps, n)
        for h in gens:
            h1 = SuperPoly(1, dict(h.terms))
            lhs = act_on_bi(h, j, tau, lam, mu)
            parts = tuple(psi_component_action(h1, comp, PSI_ROUTES[i], *weights[i])
                          for i, comp in enumerate(comps))
            assert lhs.terms == psi_lift(parts, n).terms


def test_bi_json_roundtrip():
    rng = random.Random(41)
    for _ in range(30):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            terms[(rng.randint(0, 2), rng.randint(0, 3), rng.randint(0, 2),
                   rng.randint(0, 3), rng.randint(0, 2), rng.randint(0, 3))] = \
                Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 7))
        j = BiDiffOp(2, terms, tau=C(-1), lam=LAM, mu=LAM + C(2))
        blob = json.dumps(bi_to_json(j, L), sort_keys=True)
        back = bi_from_json(json.loads(blob), L)
        assert back == j and back.tau == j.tau and back.lam == j.lam and back.mu == j.mu
    # twisted operators round-trip their flags
    sw = parity_swap(BiDiffOp.term(1, e1=1))
    back = bi_from_json(json.loads(json.dumps(bi_to_json(sw))), ())
    assert back == sw


def test_operator_equality_evaluation_oracle():
    # canonical-term equality agrees with evaluation-based equality
    rng = random.Random(6)
    monos = all_monomials(2, 5)
    for _ in range(40):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            terms[(rng.randint(0, 1), rng.randint(0, 3), rng.randint(0, 2),
                   rng.randint(0, 3))] = Fraction(rng.randint(-3, 3) or 1)
        a = LinDiffOp(2, terms)
        jumbled = list(terms.items())
        rng.shuffle(jumbled)
        b = LinDiffOp(2, dict(jumbled))
        assert a == b
        c = a + LinDiffOp.word(2, k=1, coeff=Fraction(1, 7))
        assert a != c
        assert any(a.apply_poly(p) != c.apply_poly(p) for p in monos)
