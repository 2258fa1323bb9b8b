"""Independent second construction of the tube algebra from torus
weights on a polynomial Cox ring.

Variables x0..xn, y0..yn carry opposite characters of an n-torus:
weight(x_i) = chi_{i+1} - chi_i and weight(y_i) = -weight(x_i), with
chi_0 = chi_{n+1} = 0, so weights live in Z^n with coordinates
chi_1..chi_n.  The products t_i = x_i*y_i, u = x_0...x_n and
v = y_0...y_n are invariant, and u*v = t_0...t_n.

The weight-chi_i piece is spanned over the invariants by the two
window monomials sigma_i = x_0...x_{i-1} and tau_i = y_i...y_n;
``section_basis`` enumerates that piece up to a degree bound and
certifies the factorisation monomial = invariant * window.

``end_algebra`` assembles all weight-(chi_j - chi_i) pieces and checks
that mapping a_i -> x_i, b_i -> y_i identifies the path-algebra basis
(irreducible words decorated by t-monomials) with the monomial bases,
degree by degree, and that the identification is multiplicative.  This
is the machine cross-check that the quiver presentation and the
weight-graded ring describe the same object.  ``base_change_end``
repeats the structure-constant comparison after substituting arbitrary
polynomials for the t's.

Monomials of a fixed weight are enumerated exactly: the weight
equations force the x-minus-y exponent profile g_i = c_i - d_i to be a
step function determined by one free integer, and the leftover freedom
is a t-monomial; scanning the free integer over the degree window is a
complete enumeration, with no appeal to the statements under test.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .exactalg import Field, Poly, PolyRing, monomials_upto
from .quivalg import Presentation, tube_algebra, tube_vertex


@dataclass(frozen=True)
class WeightMonomial:
    """Monomial in x0..xn, y0..yn with nonnegative exponents."""

    c: tuple  # x-exponents
    d: tuple  # y-exponents

    def __post_init__(self):
        if len(self.c) != len(self.d):
            raise ValueError("x- and y-exponent vectors differ in length")
        if any(e < 0 for e in self.c) or any(e < 0 for e in self.d):
            raise ValueError("exponents must be nonnegative")

    @property
    def nvars(self) -> int:
        return len(self.c)

    def total_degree(self) -> int:
        return sum(self.c) + sum(self.d)

    def __mul__(self, other: "WeightMonomial") -> "WeightMonomial":
        if self.nvars != other.nvars:
            raise ValueError("mixed variable counts")
        return WeightMonomial(
            tuple(a + b for a, b in zip(self.c, other.c)),
            tuple(a + b for a, b in zip(self.d, other.d)),
        )

    def divides(self, other: "WeightMonomial") -> bool:
        return all(a <= b for a, b in zip(self.c, other.c)) and all(
            a <= b for a, b in zip(self.d, other.d)
        )

    def quotient_by(self, other: "WeightMonomial") -> "WeightMonomial":
        if not other.divides(self):
            raise ValueError(f"{other.to_text()} does not divide {self.to_text()}")
        return WeightMonomial(
            tuple(a - b for a, b in zip(self.c, other.c)),
            tuple(a - b for a, b in zip(self.d, other.d)),
        )

    def to_text(self) -> str:
        parts = []
        for i, e in enumerate(self.c):
            if e == 1:
                parts.append(f"x{i}")
            elif e > 1:
                parts.append(f"x{i}^{e}")
        for i, e in enumerate(self.d):
            if e == 1:
                parts.append(f"y{i}")
            elif e > 1:
                parts.append(f"y{i}^{e}")
        return "*".join(parts) if parts else "1"


def one_monomial(n: int) -> WeightMonomial:
    return WeightMonomial((0,) * (n + 1), (0,) * (n + 1))


def x_var(i: int, n: int) -> WeightMonomial:
    return WeightMonomial(
        tuple(1 if k == i else 0 for k in range(n + 1)), (0,) * (n + 1)
    )


def y_var(i: int, n: int) -> WeightMonomial:
    return WeightMonomial(
        (0,) * (n + 1), tuple(1 if k == i else 0 for k in range(n + 1))
    )


def t_monomial(exponents: Sequence[int]) -> WeightMonomial:
    e = tuple(exponents)
    return WeightMonomial(e, e)


def u_power(n: int, r: int = 1) -> WeightMonomial:
    return WeightMonomial((r,) * (n + 1), (0,) * (n + 1))


def v_power(n: int, s: int = 1) -> WeightMonomial:
    return WeightMonomial((0,) * (n + 1), (s,) * (n + 1))


def sigma_window(i: int, n: int) -> WeightMonomial:
    """x0*...*x_{i-1}, the x-side generator of the weight-chi_i piece."""
    if not 1 <= i <= n:
        raise ValueError(f"window index must satisfy 1 <= i <= n, got {i}")
    return WeightMonomial(
        tuple(1 if k < i else 0 for k in range(n + 1)), (0,) * (n + 1)
    )


def tau_window(i: int, n: int) -> WeightMonomial:
    """y_i*...*y_n, the y-side generator of the weight-chi_i piece."""
    if not 1 <= i <= n:
        raise ValueError(f"window index must satisfy 1 <= i <= n, got {i}")
    return WeightMonomial(
        (0,) * (n + 1), tuple(1 if k >= i else 0 for k in range(n + 1))
    )


def weight(m: WeightMonomial, n: int) -> tuple:
    """Torus weight of a monomial, as a vector in Z^n with coordinates
    chi_1..chi_n (chi_0 and chi_{n+1} are trivial)."""
    if m.nvars != n + 1:
        raise ValueError(f"expected exponent vectors of length {n + 1}")
    chi = [0] * (n + 2)
    for i in range(n + 1):
        g = m.c[i] - m.d[i]
        chi[i + 1] += g
        chi[i] -= g
    return tuple(chi[1 : n + 1])


def character(i: int, n: int) -> tuple:
    """The weight chi_i as a vector (chi_0 = 0 is the empty character)."""
    if not 0 <= i <= n:
        raise ValueError(f"character index out of range: {i}")
    return tuple(1 if k == i else 0 for k in range(1, n + 1))


def invariant_certificate(m: WeightMonomial, n: int) -> dict:
    """Factor a weight-0 monomial as t-monomial times u^r or v^s.

    The x-minus-y exponent profile of a weight-0 monomial is constant;
    stripping the componentwise minimum leaves exactly u^r (constant
    positive) or v^s (constant negative)."""
    if any(weight(m, n)):
        raise ValueError(f"{m.to_text()} is not an invariant monomial")
    g = {m.c[i] - m.d[i] for i in range(n + 1)}
    assert len(g) == 1
    level = g.pop()
    texp = tuple(min(ci, di) for ci, di in zip(m.c, m.d))
    r = max(level, 0)
    s = max(-level, 0)
    rebuilt = t_monomial(texp) * u_power(n, r) * v_power(n, s)
    assert rebuilt == m
    return {"t_exponents": texp, "u_power": r, "v_power": s}


def monomials_of_weight(n: int, target: tuple, degree_bound: int) -> list:
    """All monomials of the given weight with total degree <= bound.

    Complete by construction: the weight equations determine the
    profile g_i = c_i - d_i up to one free integer s (g_n = s,
    g_{k-1} = g_k + target_k), and the remaining freedom is exactly a
    t-monomial on top of the minimal representative.
    """
    if len(target) != n:
        raise ValueError(f"weight vector must have length {n}")
    # h[k] = g_k - s, accumulated from the right
    h = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        h[k] = h[k + 1] + target[k]
    out = []
    lo = -degree_bound - max(h)
    hi = degree_bound - min(h)
    for s in range(lo, hi + 1):
        g = [s + hk for hk in h]
        base_degree = sum(abs(gi) for gi in g)
        if base_degree > degree_bound:
            continue
        base = WeightMonomial(
            tuple(max(gi, 0) for gi in g), tuple(max(-gi, 0) for gi in g)
        )
        room = (degree_bound - base_degree) // 2
        for texp in monomials_upto(n + 1, room):
            out.append(base * t_monomial(texp))
    out.sort(key=lambda m: (m.total_degree(), m.c, m.d))
    return out


# ---------------------------------------------------------------------------
# Section bases
# ---------------------------------------------------------------------------


@dataclass
class SectionBasis:
    index: int
    n: int
    degree_bound: int
    character: tuple
    sigma: WeightMonomial
    tau: WeightMonomial
    monomials: list
    certificates: list
    relations: list

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "n": self.n,
            "degree_bound": self.degree_bound,
            "character": list(self.character),
            "generators": {
                "sigma": self.sigma.to_text(),
                "tau": self.tau.to_text(),
            },
            "monomials": [m.to_text() for m in self.monomials],
            "certificates": self.certificates,
            "relations": list(self.relations),
        }


def section_basis(i: int, n: int, degree_bound: int) -> SectionBasis:
    """Enumerate the weight-chi_i monomials up to the degree bound and
    certify that each one is an invariant monomial times sigma_i or
    tau_i; also record the two exchange relations that present the
    span as a module over the invariants."""
    sigma = sigma_window(i, n)
    tau = tau_window(i, n)
    needed = max(sigma.total_degree(), tau.total_degree())
    if degree_bound < needed:
        raise ValueError(
            f"degree bound {degree_bound} cannot see both generators "
            f"(need at least {needed})"
        )
    monomials = monomials_of_weight(n, character(i, n), degree_bound)
    certificates = []
    for m in monomials:
        if sigma.divides(m):
            generator, gen_name = sigma, "sigma"
        elif tau.divides(m):
            generator, gen_name = tau, "tau"
        else:
            raise ValueError(
                f"{m.to_text()} has weight chi_{i} but neither window "
                f"monomial divides it"
            )
        cert = invariant_certificate(m.quotient_by(generator), n)
        certificates.append(
            {"monomial": m.to_text(), "generator": gen_name, "invariant": cert}
        )
    # exchange relations: (t_i...t_n) sigma = u tau, (t_0...t_{i-1}) tau = v sigma
    t_high = t_monomial(tuple(1 if k >= i else 0 for k in range(n + 1)))
    t_low = t_monomial(tuple(1 if k < i else 0 for k in range(n + 1)))
    assert t_high * sigma == u_power(n) * tau
    assert t_low * tau == v_power(n) * sigma
    relations = [
        f"({t_high.to_text()})*sigma = u*tau",
        f"({t_low.to_text()})*tau = v*sigma",
    ]
    return SectionBasis(
        i, n, degree_bound, character(i, n), sigma, tau, monomials,
        certificates, relations,
    )


# ---------------------------------------------------------------------------
# Wedge nonvanishing
# ---------------------------------------------------------------------------


def wedge_components(n: int) -> list:
    """The monomials sigma_1...sigma_j * tau_{j+2}...tau_n for
    j = 0..n-1, whose simultaneous vanishing is what the instability
    check inspects."""
    out = []
    for j in range(n):
        comp = one_monomial(n)
        for m in range(1, j + 1):
            comp = comp * sigma_window(m, n)
        for m in range(j + 2, n + 1):
            comp = comp * tau_window(m, n)
        out.append(comp)
    return out


def wedge_nonvanishing(n: int) -> dict:
    """Exhaustively check, over all 2^(2(n+1)) patterns of vanishing
    variables, that a pattern killing every wedge component kills some
    x_j and y_k with j < k (i.e. only unstable points are reached)."""
    if n < 2:
        raise ValueError("the wedge check needs n >= 2")
    components = wedge_components(n)
    # per component: which x- and y-variables occur
    supports = []
    for comp in components:
        xs = {i for i in range(n + 1) if comp.c[i] > 0}
        ys = {i for i in range(n + 1) if comp.d[i] > 0}
        supports.append((xs, ys))
    counterexamples = []
    total = 0
    m = n + 1
    for xmask in range(1 << m):
        xzero = {i for i in range(m) if xmask >> i & 1}
        for ymask in range(1 << m):
            total += 1
            yzero = {i for i in range(m) if ymask >> i & 1}
            all_vanish = all(
                (xs & xzero) or (ys & yzero) for xs, ys in supports
            )
            if not all_vanish:
                continue
            unstable = any(j < k for j in xzero for k in yzero)
            if not unstable:
                counterexamples.append(
                    {"x_zero": sorted(xzero), "y_zero": sorted(yzero)}
                )
    return {
        "n": n,
        "patterns_checked": total,
        "components": [c.to_text() for c in components],
        "holds": not counterexamples,
        "counterexamples": counterexamples,
    }


# ---------------------------------------------------------------------------
# Endomorphism algebra comparison
# ---------------------------------------------------------------------------


def default_degree_bound(n: int) -> int:
    """Large enough to contain u^2, v^2, and every single-wind path."""
    return 2 * (n + 1) + 4


def word_image(word, n: int) -> WeightMonomial:
    """Multiplicative dictionary a_i -> x_i, b_i -> y_i on a path."""
    image = one_monomial(n)
    for arrow in word:
        kind, idx = arrow[0], int(arrow[1:])
        if kind == "a":
            image = image * x_var(idx, n)
        elif kind == "b":
            image = image * y_var(idx, n)
        else:
            raise ValueError(f"unexpected arrow {arrow!r}")
    return image


def cyclic_shift_monomial(m: WeightMonomial) -> WeightMonomial:
    """x_i -> x_{i+1}, y_i -> y_{i+1} cyclically."""
    return WeightMonomial(
        m.c[-1:] + m.c[:-1], m.d[-1:] + m.d[:-1]
    )


@dataclass
class EndComparisonReport:
    n: int
    degree_bound: int
    ok: bool
    rank_table: dict = dc_field(default_factory=dict)
    generator_images: dict = dc_field(default_factory=dict)
    mismatches: list = dc_field(default_factory=list)
    basis_pairs_checked: int = 0
    products_checked: int = 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degree_bound": self.degree_bound,
            "ok": self.ok,
            "rank_table": {
                f"{i},{j}": {str(d): r for d, r in sorted(degrees.items())}
                for (i, j), degrees in sorted(self.rank_table.items())
            },
            "generator_images": dict(sorted(self.generator_images.items())),
            "mismatches": self.mismatches[:20],
            "basis_pairs_checked": self.basis_pairs_checked,
            "products_checked": self.products_checked,
        }


def _tube_words(pres: Presentation, n: int, bound: int) -> dict:
    words = {}
    for i in range(n + 1):
        for j in range(n + 1):
            words[(i, j)] = pres.irreducible_words(
                tube_vertex(i), tube_vertex(j), bound
            )
    return words


def end_algebra(n: int, length_bound: Optional[int] = None) -> EndComparisonReport:
    """Compare the weight-graded monomial spaces with the path-algebra
    basis: the dictionary a_i -> x_i, b_i -> y_i must send the
    irreducible words decorated by t-monomials bijectively onto the
    weight-(chi_j - chi_i) monomials, degree by degree, and must turn
    path composition into monomial multiplication."""
    if n < 1:
        raise ValueError("need n >= 1")
    bound = default_degree_bound(n) if length_bound is None else length_bound
    ring = PolyRing(Field.rationals(), tuple(f"t{k}" for k in range(n + 1)))
    tube = tube_algebra(n, ring)
    report = EndComparisonReport(n, bound, True)
    report.generator_images = {
        **{f"a{i}": f"x{i}" for i in range(n + 1)},
        **{f"b{i}": f"y{i}" for i in range(n + 1)},
        **{f"t{i}": f"x{i}*y{i}" for i in range(n + 1)},
    }
    words = _tube_words(tube, n, bound)
    for i in range(n + 1):
        chi_i = character(i, n)
        for j in range(n + 1):
            chi_j = character(j, n)
            target = tuple(b - a for a, b in zip(chi_i, chi_j))
            cox_side = monomials_of_weight(n, target, bound)
            seen = {}
            for path in words[(i, j)]:
                base = word_image(path.arrows, n)
                room = (bound - len(path.arrows)) // 2
                for texp in monomials_upto(n + 1, room):
                    m = base * t_monomial(texp)
                    report.basis_pairs_checked += 1
                    if m in seen:
                        report.mismatches.append(
                            {
                                "kind": "not_injective",
                                "hom": [i, j],
                                "monomial": m.to_text(),
                            }
                        )
                    seen[m] = path
            cox_set = set(cox_side)
            for m in cox_set - set(seen):
                report.mismatches.append(
                    {
                        "kind": "missing_path",
                        "hom": [i, j],
                        "monomial": m.to_text(),
                    }
                )
            for m in set(seen) - cox_set:
                report.mismatches.append(
                    {
                        "kind": "wrong_weight_or_degree",
                        "hom": [i, j],
                        "monomial": m.to_text(),
                    }
                )
            degrees = {}
            for m in cox_side:
                degrees[m.total_degree()] = degrees.get(m.total_degree(), 0) + 1
            report.rank_table[(i, j)] = degrees
    # multiplicativity on composable pairs of words
    for i in range(n + 1):
        for j in range(n + 1):
            for k in range(n + 1):
                for w1 in words[(i, j)]:
                    if w1.is_lazy:
                        continue
                    for w2 in words[(j, k)]:
                        if w2.is_lazy:
                            continue
                        if len(w1.arrows) + len(w2.arrows) > bound:
                            continue
                        product = tube.normal_form(w2.arrows + w1.arrows)
                        [(nf_path, coef)] = list(product.terms.items())
                        [(texp, scalar)] = coef.terms.items()
                        assert scalar == ring.field.one
                        lhs = word_image(w2.arrows, n) * word_image(w1.arrows, n)
                        rhs = t_monomial(texp) * word_image(nf_path.arrows, n)
                        report.products_checked += 1
                        if lhs != rhs:
                            report.mismatches.append(
                                {
                                    "kind": "not_multiplicative",
                                    "pair": [
                                        "*".join(w2.arrows),
                                        "*".join(w1.arrows),
                                    ],
                                    "lhs": lhs.to_text(),
                                    "rhs": rhs.to_text(),
                                }
                            )
    report.ok = not report.mismatches
    return report


@dataclass
class BaseChangeReport:
    n: int
    degree_bound: int
    ok: bool
    substitution: list = dc_field(default_factory=list)
    products_checked: int = 0
    mismatches: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "degree_bound": self.degree_bound,
            "ok": self.ok,
            "substitution": list(self.substitution),
            "products_checked": self.products_checked,
            "mismatches": self.mismatches[:20],
        }


def base_change_end(
    n: int, f: Sequence[Poly], length_bound: Optional[int] = None
) -> BaseChangeReport:
    """Verify that substituting f_i for t_i commutes with the
    path-to-monomial dictionary: the structure constants of the
    specialised path algebra equal the t-exponents read off from the
    monomial products, evaluated at f."""
    if len(f) != n + 1:
        raise ValueError(f"need {n + 1} substitution values, got {len(f)}")
    bound = default_degree_bound(n) if length_bound is None else length_bound
    ring = f[0].ring
    specialised = tube_algebra(n, ring, tuple(f))
    generic_ring = PolyRing(Field.rationals(), tuple(f"t{k}" for k in range(n + 1)))
    generic = tube_algebra(n, generic_ring)
    report = BaseChangeReport(
        n, bound, True, [p.to_text() for p in f]
    )
    words = _tube_words(generic, n, bound)
    for i in range(n + 1):
        for j in range(n + 1):
            for k in range(n + 1):
                for w1 in words[(i, j)]:
                    if w1.is_lazy:
                        continue
                    for w2 in words[(j, k)]:
                        if w2.is_lazy:
                            continue
                        if len(w1.arrows) + len(w2.arrows) > bound:
                            continue
                        # t-exponents predicted by the monomial product
                        lhs = word_image(w2.arrows, n) * word_image(w1.arrows, n)
                        texp = tuple(
                            min(ci, di) for ci, di in zip(lhs.c, lhs.d)
                        )
                        expected_word = lhs.quotient_by(t_monomial(texp))
                        predicted = ring.one()
                        for fi, e in zip(f, texp):
                            predicted = predicted * fi**e
                        actual = specialised.normal_form(w2.arrows + w1.arrows)
                        report.products_checked += 1
                        if predicted.is_zero():
                            good = actual.is_zero()
                        elif len(actual.terms) != 1:
                            good = False
                        else:
                            [(path, coef)] = list(actual.terms.items())
                            good = (
                                coef == predicted
                                and word_image(path.arrows, n) == expected_word
                            )
                        if not good:
                            report.mismatches.append(
                                {
                                    "pair": [
                                        "*".join(w2.arrows),
                                        "*".join(w1.arrows),
                                    ],
                                    "predicted": predicted.to_text(),
                                    "actual": actual.to_text(),
                                }
                            )
    report.ok = not report.mismatches
    return report
