"""Graded quiver presentations with rewriting normal forms and differentials.

A presentation is a quiver with polynomial coefficients, a confluent set
of two-arrow rewrite rules, and an optional differential on arrows
extended by the graded Leibniz rule.  The constructors at the bottom
build the algebras the rest of the package computes with: the cyclic
"tube" algebra over k[t_0..t_n], the linear contraction quiver with
degree -1 loops, and Drinfeld localisation (a free degree -1 loop
``eps`` with d(eps) = e at a chosen vertex).

Conventions:

* Composition is right-to-left.  A word is a tuple of arrow names where
  the rightmost arrow acts first; for adjacent letters (w_i, w_{i+1})
  composability means target(w_{i+1}) == source(w_i).
* The lazy (identity) path at a vertex is the empty word tagged with its
  vertex.
* Degrees are homological: the differential raises degree by exactly 1,
  and the Koszul sign rule is d(vw) = d(v) w + (-1)^{|v|} v d(w).
* Rewrite rules have a two-arrow left side and a strictly shorter right
  side (words of length <= 1), so rewriting terminates; confluence is
  checked by resolving all length-3 critical pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

from .exactalg import Poly, PolyRing


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str
    deg: int = 0


class Quiver:
    __slots__ = ("vertices", "arrows", "by_name")

    def __init__(self, vertices: Sequence[str], arrows: Sequence[Arrow]):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.src not in vset or a.tgt not in vset:
                raise ValueError(f"arrow {a.name} has endpoints outside the quiver")
        self.by_name = {a.name: a for a in self.arrows}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )


class Path(NamedTuple):
    """A composable word of arrow names, or a lazy path at a vertex.

    ``arrows`` lists names left-to-right with the rightmost acting
    first; a lazy path has ``arrows == ()`` and carries its vertex.
    """

    arrows: tuple
    vertex: Optional[str] = None

    @property
    def is_lazy(self) -> bool:
        return not self.arrows


def lazy(vertex: str) -> Path:
    return Path((), vertex)


class AlgebraElement:
    """A normal-form linear combination of paths with Poly coefficients."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: "Presentation", terms: dict):
        self.pres = pres
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.pres is other.pres
            and self.terms == other.terms
        )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if self.pres is not other.pres:
            raise ValueError("elements of different presentations")
        terms = dict(self.terms)
        for path, coef in other.terms.items():
            s = terms.get(path)
            s = coef if s is None else s + coef
            if s.is_zero():
                terms.pop(path, None)
            else:
                terms[path] = s
        return AlgebraElement(self.pres, terms)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.pres, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, poly: Poly) -> "AlgebraElement":
        if poly.is_zero():
            return AlgebraElement(self.pres, {})
        terms = {}
        for path, coef in self.terms.items():
            prod = coef * poly
            if not prod.is_zero():
                terms[path] = prod
        return AlgebraElement(self.pres, terms)

    def sorted_terms(self) -> list:
        return sorted(
            self.terms.items(),
            key=lambda t: (len(t[0].arrows), t[0].arrows, t[0].vertex or ""),
        )

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for path, coef in self.sorted_terms():
            word = "*".join(path.arrows) if path.arrows else f"e[{path.vertex}]"
            ctext = coef.to_text()
            if ctext == "1":
                parts.append(word)
            elif " + " in ctext or " - " in ctext:
                parts.append(f"({ctext})*{word}")
            else:
                parts.append(f"{ctext}*{word}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        out = []
        for path, coef in self.sorted_terms():
            entry = {"word": list(path.arrows), "coef": coef.to_json()}
            if path.is_lazy:
                entry["vertex"] = path.vertex
            out.append(entry)
        return {"terms": out}

    def __repr__(self) -> str:
        return f"<AlgebraElement {self.to_text()}>"


@dataclass
class ConfluenceReport:
    confluent: bool
    critical_pairs_checked: int
    unresolved: list  # list of (overlap word, normal form 1, normal form 2)


class Presentation:
    """Quiver + coefficient ring + rewrite rules + differential.

    ``rules`` maps a two-arrow left side (pair of arrow names, word
    order) to its right side, given as ``(coef Poly, Path)`` pairs.
    ``differential`` maps an arrow name to a list of such pairs.

    ``grading_weights`` optionally declares an extra multigrading: a
    vector per arrow plus one per ring variable.  When every rule and
    differential entry is homogeneous for it, truncated cohomology can
    decompose its linear algebra into much smaller blocks.  The
    constructor validates the declaration and silently drops it when it
    fails, so a wrong declaration can never change any answer.
    """

    def __init__(
        self,
        quiver: Quiver,
        ring: PolyRing,
        rules: dict,
        differential: Optional[dict] = None,
        require_confluent: bool = True,
        grading_weights: Optional[dict] = None,
        variable_weights: Optional[list] = None,
    ):
        self.quiver = quiver
        self.ring = ring
        self.rules = {tuple(k): tuple(v) for k, v in rules.items()}
        self.differential = {
            k: tuple(v) for k, v in (differential or {}).items()
        }
        self._validate_rules()
        self.confluence = self.check_confluence()
        if require_confluent and not self.confluence.confluent:
            raise ValueError(
                f"rule set not confluent; unresolved pairs: "
                f"{[w for w, _, _ in self.confluence.unresolved]}"
            )
        self._validate_differential()
        self.grading_weights = None
        self.variable_weights = None
        if grading_weights is not None and variable_weights is not None:
            if self._grading_is_homogeneous(grading_weights, variable_weights):
                self.grading_weights = dict(grading_weights)
                self.variable_weights = list(variable_weights)

    # -- structural helpers -------------------------------------------------

    def arrow(self, name: str) -> Arrow:
        return self.quiver.by_name[name]

    def path_source(self, path: Path) -> str:
        if path.is_lazy:
            return path.vertex
        return self.arrow(path.arrows[-1]).src

    def path_target(self, path: Path) -> str:
        if path.is_lazy:
            return path.vertex
        return self.arrow(path.arrows[0]).tgt

    def path_degree(self, path: Path) -> int:
        return sum(self.arrow(a).deg for a in path.arrows)

    def make_path(self, arrows: Sequence[str], vertex: Optional[str] = None) -> Path:
        """Validated path constructor; raises on non-composable words."""
        arrows = tuple(arrows)
        if not arrows:
            if vertex is None or vertex not in self.quiver.vertices:
                raise ValueError("lazy path needs a vertex of the quiver")
            return Path((), vertex)
        for name in arrows:
            if name not in self.quiver.by_name:
                raise ValueError(f"unknown arrow {name!r}")
        for left, right in zip(arrows, arrows[1:]):
            if self.arrow(right).tgt != self.arrow(left).src:
                raise ValueError(
                    f"non-composable word {arrows}: {right} then {left}"
                )
        return Path(arrows, None)

    def element(self, pairs: Iterable) -> AlgebraElement:
        """Element from (coef, Path) pairs, normalised."""
        terms: dict = {}
        for coef, path in pairs:
            if coef.is_zero():
                continue
            s = terms.get(path)
            s = coef if s is None else s + coef
            if s.is_zero():
                terms.pop(path, None)
            else:
                terms[path] = s
        return self.reduce(AlgebraElement(self, terms))

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def unit(self, vertex: str) -> AlgebraElement:
        return AlgebraElement(self, {lazy(vertex): self.ring.one()})

    def arrow_element(self, name: str) -> AlgebraElement:
        return AlgebraElement(self, {Path((name,), None): self.ring.one()})

    def one(self) -> AlgebraElement:
        """Sum of all lazy paths (the algebra unit)."""
        one = self.ring.one()
        return AlgebraElement(self, {lazy(v): one for v in self.quiver.vertices})

    # -- validation ----------------------------------------------------------

    def _rhs_endpoints_ok(self, lhs: tuple, rhs: tuple) -> None:
        lhs_path = self.make_path(lhs)
        src, tgt = self.path_source(lhs_path), self.path_target(lhs_path)
        deg = self.path_degree(lhs_path)
        for coef, path in rhs:
            if coef.ring != self.ring:
                raise ValueError("rule coefficient outside the coefficient ring")
            if len(path.arrows) > 1:
                raise ValueError(
                    f"rule right side must be strictly shorter than the left: {path}"
                )
            if path.is_lazy and path.vertex not in self.quiver.vertices:
                raise ValueError(f"rule right side at unknown vertex {path.vertex}")
            if not path.is_lazy:
                self.make_path(path.arrows)
            if self.path_source(path) != src or self.path_target(path) != tgt:
                raise ValueError(f"rule {lhs} -> {path} changes endpoints")
            if self.path_degree(path) != deg:
                raise ValueError(f"rule {lhs} -> {path} changes degree")

    def _validate_rules(self) -> None:
        for lhs, rhs in self.rules.items():
            if len(lhs) != 2:
                raise ValueError(f"rule left side must be a two-arrow word: {lhs}")
            self._rhs_endpoints_ok(lhs, rhs)

    def _validate_differential(self) -> None:
        for name, image in self.differential.items():
            arrow = self.arrow(name)
            for coef, path in image:
                if self.path_source(path) != arrow.src or self.path_target(path) != arrow.tgt:
                    raise ValueError(f"d({name}) changes endpoints")
                if self.path_degree(path) != arrow.deg + 1:
                    raise ValueError(f"d({name}) does not raise degree by 1")
        # d^2 = 0 on arrows.
        for name in self.differential:
            dd = self.differential_of(self.differential_of(self.arrow_element(name)))
            if not dd.is_zero():
                raise ValueError(f"d^2({name}) = {dd.to_text()} != 0")
        # d descends to the quotient: differentiating the raw left-side
        # word (Leibniz, then reduce) must agree with d of the right side.
        if self.differential:
            for lhs, rhs in self.rules.items():
                raw = AlgebraElement(self, {Path(lhs, None): self.ring.one()})
                left = self.differential_of(raw)
                right = self.differential_of(
                    AlgebraElement(self, {p: c for c, p in rhs if not c.is_zero()})
                )
                if left != right:
                    raise ValueError(
                        f"differential incompatible with rule {lhs}: "
                        f"{left.to_text()} vs {right.to_text()}"
                    )

    def _grading_is_homogeneous(self, arrow_weights: dict, var_weights: list) -> bool:
        dim = len(var_weights[0]) if var_weights else 0

        def poly_weight(p: Poly) -> Optional[tuple]:
            weights = set()
            for exp in p.terms:
                w = tuple(
                    sum(e * vw[d] for e, vw in zip(exp, var_weights))
                    for d in range(dim)
                )
                weights.add(w)
            if len(weights) > 1:
                return None
            return weights.pop() if weights else (0,) * dim

        def word_weight(path: Path) -> tuple:
            return tuple(
                sum(arrow_weights[a][d] for a in path.arrows) for d in range(dim)
            )

        def term_weight(coef: Poly, path: Path) -> Optional[tuple]:
            pw = poly_weight(coef)
            if pw is None:
                return None
            ww = word_weight(path)
            return tuple(a + b for a, b in zip(pw, ww))

        for a in self.quiver.arrows:
            if a.name not in arrow_weights:
                return False
        for lhs, rhs in self.rules.items():
            lw = word_weight(Path(lhs, None))
            for coef, path in rhs:
                tw = term_weight(coef, path)
                if tw is None or tw != lw:
                    return False
        for name, image in self.differential.items():
            aw = tuple(arrow_weights[name])
            for coef, path in image:
                tw = term_weight(coef, path)
                if tw is None or tw != aw:
                    return False
        return True

    def term_grading(self, path: Path, exp: tuple) -> tuple:
        """Extra-grading value of a basis term (word, monomial)."""
        dim = len(self.variable_weights[0]) if self.variable_weights else 0
        return tuple(
            sum(self.grading_weights[a][d] for a in path.arrows)
            + sum(e * vw[d] for e, vw in zip(exp, self.variable_weights))
            for d in range(dim)
        )

    # -- rewriting -----------------------------------------------------------

    def reduce_raw(self, pairs: Iterable) -> AlgebraElement:
        """Reduce (coef, Path) pairs to normal form (worklist rewriting)."""
        out: dict = {}
        stack = [(coef, path) for coef, path in pairs if not coef.is_zero()]
        while stack:
            coef, path = stack.pop()
            arrows = path.arrows
            hit = None
            for i in range(len(arrows) - 1):
                if (arrows[i], arrows[i + 1]) in self.rules:
                    hit = i
                    break
            if hit is None:
                s = out.get(path)
                s = coef if s is None else s + coef
                if s.is_zero():
                    out.pop(path, None)
                else:
                    out[path] = s
                continue
            prefix, suffix = arrows[:hit], arrows[hit + 2:]
            for rcoef, rpath in self.rules[(arrows[hit], arrows[hit + 1])]:
                new_arrows = prefix + rpath.arrows + suffix
                if new_arrows:
                    new_path = Path(new_arrows, None)
                else:
                    # Whole word collapsed to a lazy path; locate its vertex.
                    vertex = rpath.vertex if rpath.is_lazy else None
                    new_path = Path((), vertex)
                stack.append((coef * rcoef, new_path))
        return AlgebraElement(self, out)

    def reduce(self, element: AlgebraElement) -> AlgebraElement:
        return self.reduce_raw(
            [(coef, path) for path, coef in element.terms.items()]
        )

    def normal_form(self, word, coef: Optional[Poly] = None) -> AlgebraElement:
        """Normal form of a word (sequence of arrow names) or a Path."""
        if isinstance(word, Path):
            path = word
        else:
            path = self.make_path(word)
        return self.reduce_raw([(coef if coef is not None else self.ring.one(), path)])

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        """Product x*y, composing right-to-left (y acts first)."""
        if x.pres is not self or y.pres is not self:
            raise ValueError("elements of a different presentation")
        pairs = []
        for px, cx in x.terms.items():
            for py, cy in y.terms.items():
                if self.path_source(px) != self.path_target(py):
                    continue  # concatenate-or-die: mismatched endpoints give 0
                arrows = px.arrows + py.arrows
                if arrows:
                    path = Path(arrows, None)
                else:
                    path = px if px.is_lazy else py
                pairs.append((cx * cy, path))
        return self.reduce_raw(pairs)

    def differential_of(self, x: AlgebraElement) -> AlgebraElement:
        """Leibniz extension of the arrow differential: coefficients are
        central constants for d, so d(c * w) = c * d(w)."""
        if not self.differential:
            return self.zero()
        pairs = []
        one = self.ring.one()
        for path, coef in x.terms.items():
            arrows = path.arrows
            sign_deg = 0
            for i, name in enumerate(arrows):
                image = self.differential.get(name)
                if image:
                    sign = one if sign_deg % 2 == 0 else self.ring.const(-1)
                    for dcoef, dpath in image:
                        new_arrows = arrows[:i] + dpath.arrows + arrows[i + 1:]
                        if new_arrows:
                            new_path = Path(new_arrows, None)
                        else:
                            new_path = Path((), dpath.vertex)
                        pairs.append((coef * dcoef * sign, new_path))
                sign_deg += self.arrow(name).deg
        return self.reduce_raw(pairs)

    # -- confluence ----------------------------------------------------------

    def check_confluence(self) -> ConfluenceReport:
        """Resolve all critical pairs from overlapping two-arrow left sides.

        Overlaps are words (x, y, z) where both (x, y) and (y, z) are
        rule left sides; each is reduced rule-first and rule-second and
        the results compared once fully reduced.
        """
        unresolved = []
        checked = 0
        one = self.ring.one()
        for (x, y) in self.rules:
            for (y2, z) in self.rules:
                if y2 != y:
                    continue
                # (x, y, z) is composable because both rules are.
                checked += 1
                word = (x, y, z)
                first = self.reduce_raw(
                    [
                        (coef, Path(rpath.arrows + (z,), None))
                        for coef, rpath in self.rules[(x, y)]
                    ]
                )
                second = self.reduce_raw(
                    [
                        (coef, Path((x,) + rpath.arrows, None))
                        for coef, rpath in self.rules[(y, z)]
                    ]
                )
                if first != second:
                    unresolved.append((word, first, second))
        return ConfluenceReport(not unresolved, checked, unresolved)

    # -- basis enumeration -----------------------------------------------------

    def irreducible_words(
        self,
        source: str,
        target: Optional[str] = None,
        length_bound: int = 0,
        homological_degree: Optional[int] = None,
    ) -> list[Path]:
        """All rule-irreducible words from ``source``, grown leftward.

        A word stays irreducible under left extension iff the single new
        adjacent pair avoids every rule left side, so the search prunes
        exactly.  Results are filtered by target/degree when given and
        sorted by (length, arrow names).
        """
        by_src: dict[str, list[Arrow]] = {}
        for a in self.quiver.arrows:
            by_src.setdefault(a.src, []).append(a)
        out: list[Path] = []
        frontier: list[tuple] = [((), source)]
        # Entries: (arrows tuple, current target vertex).
        for _ in range(length_bound):
            new_frontier = []
            for arrows, tip in frontier:
                for a in by_src.get(tip, []):
                    if arrows and (a.name, arrows[0]) in self.rules:
                        continue
                    new_frontier.append(((a.name,) + arrows, a.tgt))
            frontier = new_frontier
            out.extend(Path(arrows, None) for arrows, _ in frontier)
        words = [lazy(source)] + out
        result = []
        for path in words:
            if target is not None and self.path_target(path) != target:
                continue
            if (
                homological_degree is not None
                and self.path_degree(path) != homological_degree
            ):
                continue
            result.append(path)
        result.sort(key=lambda p: (len(p.arrows), p.arrows, p.vertex or ""))
        return result

    # -- serialisation ---------------------------------------------------------

    def to_json(self) -> dict:
        def pairs_json(pairs):
            out = []
            for coef, path in pairs:
                entry = {"word": list(path.arrows), "coef": coef.to_json()}
                if path.is_lazy:
                    entry["vertex"] = path.vertex
                out.append(entry)
            return out

        return {
            "vertices": list(self.quiver.vertices),
            "arrows": [
                {"name": a.name, "src": a.src, "tgt": a.tgt, "deg": a.deg}
                for a in self.quiver.arrows
            ],
            "coefficients": {
                "field": self.ring.field.to_json(),
                "variables": list(self.ring.names),
            },
            "rules": [
                {"lhs": list(lhs), "rhs": pairs_json(rhs)}
                for lhs, rhs in sorted(self.rules.items())
            ],
            "diff": {
                name: pairs_json(image)
                for name, image in sorted(self.differential.items())
            },
        }

    def to_text(self) -> str:
        lines = [f"vertices: {', '.join(self.quiver.vertices)}"]
        for a in self.quiver.arrows:
            lines.append(f"arrow {a.name}: {a.src} -> {a.tgt}  deg {a.deg}")
        for lhs, rhs in sorted(self.rules.items()):
            rhs_el = AlgebraElement(self, {p: c for c, p in rhs})
            lines.append(f"rule {'*'.join(lhs)} -> {rhs_el.to_text()}")
        for name, image in sorted(self.differential.items()):
            img_el = AlgebraElement(self, {p: c for c, p in image})
            lines.append(f"d({name}) = {img_el.to_text()}")
        return "\n".join(lines)


def graded_basis(
    pres: Presentation,
    source: str,
    target: str,
    homological_degree: int,
    length_bound: int,
) -> list[Path]:
    """Irreducible words source -> target in one homological degree."""
    return pres.irreducible_words(
        source, target, length_bound, homological_degree
    )


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def tube_vertex(i: int) -> str:
    return f"L{i}"


def tube_algebra(
    n: int, ring: PolyRing, f: Optional[Sequence[Poly]] = None
) -> Presentation:
    """The cyclic-quiver algebra on vertices L0..Ln over ``ring``.

    Arrows a_i: L_i -> L_{i+1} and b_i: L_{i+1} -> L_i (indices mod
    n+1), all in degree 0, with backtracking pairs rewriting to central
    scalars: a_i b_i -> c_i e_{i+1} and b_i a_i -> c_i e_i, where c_i is
    the i-th ring variable by default, or ``f[i]`` when a base change is
    requested.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if f is None:
        if ring.nvars != n + 1:
            raise ValueError(
                f"ring must have {n + 1} variables for the default scalars, "
                f"got {ring.nvars}"
            )
        f = ring.gens()
    else:
        f = list(f)
        if len(f) != n + 1:
            raise ValueError(f"need {n + 1} scalar polynomials, got {len(f)}")
        for p in f:
            if p.ring != ring:
                raise ValueError("scalar polynomial outside the coefficient ring")
    m = n + 1
    vertices = [tube_vertex(i) for i in range(m)]
    arrows = []
    for i in range(m):
        arrows.append(Arrow(f"a{i}", tube_vertex(i), tube_vertex((i + 1) % m), 0))
    for i in range(m):
        arrows.append(Arrow(f"b{i}", tube_vertex((i + 1) % m), tube_vertex(i), 0))
    rules = {}
    for i in range(m):
        rules[(f"a{i}", f"b{i}")] = [(f[i], lazy(tube_vertex((i + 1) % m)))]
        rules[(f"b{i}", f"a{i}")] = [(f[i], lazy(tube_vertex(i)))]

    arrow_weights, var_weights = _monomial_grading(ring, f, "a", "b")
    return Presentation(
        Quiver(vertices, arrows),
        ring,
        rules,
        grading_weights=arrow_weights,
        variable_weights=var_weights,
    )


def _monomial_grading(ring, f, aprefix, bprefix):
    """Extra multigrading for rules x_i y_i -> f_i when every f_i is a
    monomial: variable v gets twice its unit vector and the two arrows of
    pair i split the weight of f_i evenly.  Returns (None, None) when
    some f_i is not a monomial (the grading would not be homogeneous)."""
    for p in f:
        if len(p.terms) != 1:
            return None, None
    dim = ring.nvars
    var_weights = []
    for v in range(dim):
        w = [0] * dim
        w[v] = 2
        var_weights.append(tuple(w))
    arrow_weights = {}
    for i, p in enumerate(f):
        exp = next(iter(p.terms))
        arrow_weights[f"{aprefix}{i}"] = exp
        arrow_weights[f"{bprefix}{i}"] = exp
    return arrow_weights, var_weights


def winding_element(pres: Presentation, n: int, letter: str) -> AlgebraElement:
    """Sum over base vertices of the full cycle in a- or b-arrows.

    ``letter`` "a" gives u = sum_i a_{i-1}...a_{i+1} a_i read as the full
    cycle based at L_i; "b" gives the reverse-orientation cycle v.
    """
    m = n + 1
    one = pres.ring.one()
    pairs = []
    for i in range(m):
        if letter == "a":
            names = tuple(f"a{(i + k) % m}" for k in range(m - 1, -1, -1))
        else:
            names = tuple(f"b{(i + k) % m}" for k in range(m))
        pairs.append((one, pres.make_path(names)))
    return pres.element(pairs)


def contraction_vertex(i: int) -> str:
    return str(i)


def contraction_quiver(
    n: int,
    ring: PolyRing,
    f: Sequence[Poly],
    idempotent_convention: str = "standard",
) -> Presentation:
    """The linear DG quiver on vertices 1..n with degree -1 end loops.

    Under the "standard" convention the degree-0 arrows run a_i: i ->
    i+1 and b_i: i+1 -> i for i = 1..n-1, rewriting by a_i b_i -> f_i
    e_{i+1} and b_i a_i -> f_i e_i (words compose right to left, so
    a_i b_i is the loop at the higher vertex).  "swapped" reverses the
    orientation of each interior pair, so the same equations read
    a_i b_i = f_i e_i and b_i a_i = f_i e_{i+1}; the two presentations
    are isomorphic by renaming a <-> b, and the verification suite uses
    "standard".  Loops alpha at vertex 1 and beta at vertex n sit in
    degree -1 with alpha^2 = beta^2 = 0 and d(alpha) = f_0 e_1,
    d(beta) = f_n e_n.
    """
    if n < 1:
        raise ValueError("n must be >= 1 (no vertices remain otherwise)")
    if idempotent_convention not in ("standard", "swapped"):
        raise ValueError(f"unknown idempotent convention {idempotent_convention!r}")
    f = list(f)
    if len(f) != n + 1:
        raise ValueError(f"need {n + 1} scalar polynomials, got {len(f)}")
    for p in f:
        if p.ring != ring:
            raise ValueError("scalar polynomial outside the coefficient ring")
    vertices = [contraction_vertex(i) for i in range(1, n + 1)]
    arrows = []
    for i in range(1, n):
        lo, hi = contraction_vertex(i), contraction_vertex(i + 1)
        if idempotent_convention == "standard":
            arrows.append(Arrow(f"a{i}", lo, hi, 0))
            arrows.append(Arrow(f"b{i}", hi, lo, 0))
        else:
            arrows.append(Arrow(f"a{i}", hi, lo, 0))
            arrows.append(Arrow(f"b{i}", lo, hi, 0))
    arrows.append(Arrow("alpha", contraction_vertex(1), contraction_vertex(1), -1))
    arrows.append(Arrow("beta", contraction_vertex(n), contraction_vertex(n), -1))
    rules = {}
    for i in range(1, n):
        lo, hi = lazy(contraction_vertex(i)), lazy(contraction_vertex(i + 1))
        if idempotent_convention == "standard":
            rules[(f"a{i}", f"b{i}")] = [(f[i], hi)]
            rules[(f"b{i}", f"a{i}")] = [(f[i], lo)]
        else:
            rules[(f"a{i}", f"b{i}")] = [(f[i], lo)]
            rules[(f"b{i}", f"a{i}")] = [(f[i], hi)]
    rules[("alpha", "alpha")] = []
    rules[("beta", "beta")] = []
    differential = {
        "alpha": [(f[0], lazy(contraction_vertex(1)))],
        "beta": [(f[n], lazy(contraction_vertex(n)))],
    }

    # Extra multigrading: variable v weighs 2*e_v, each degree-0 arrow of
    # pair i weighs exp(f_i), and the end loops carry the full weight of
    # their differential image.  Only available when every f_i is a
    # monomial; otherwise nothing is homogeneous and we skip it.
    arrow_weights: Optional[dict] = {}
    var_weights = None
    if all(len(p.terms) == 1 for p in f):
        dim = ring.nvars
        var_weights = []
        for v in range(dim):
            w = [0] * dim
            w[v] = 2
            var_weights.append(tuple(w))
        for i in range(1, n):
            exp = next(iter(f[i].terms))
            arrow_weights[f"a{i}"] = exp
            arrow_weights[f"b{i}"] = exp
        arrow_weights["alpha"] = tuple(2 * e for e in next(iter(f[0].terms)))
        arrow_weights["beta"] = tuple(2 * e for e in next(iter(f[n].terms)))
    else:
        arrow_weights = None

    return Presentation(
        Quiver(vertices, arrows),
        ring,
        rules,
        differential,
        grading_weights=arrow_weights,
        variable_weights=var_weights,
    )


def drinfeld_localize(pres: Presentation, vertex: str) -> Presentation:
    """Freely adjoin a degree -1 loop ``eps`` at ``vertex`` with
    d(eps) = e_vertex.  No new rewrite rules: powers of eps are honest
    irreducible words."""
    if vertex not in pres.quiver.vertices:
        raise ValueError(f"unknown vertex {vertex!r}")
    if "eps" in pres.quiver.by_name:
        raise ValueError("presentation already has an arrow named eps")
    for a in pres.quiver.arrows:
        if a.deg != 0:
            raise ValueError("localisation expects a degree-0 presentation")
    arrows = list(pres.quiver.arrows) + [Arrow("eps", vertex, vertex, -1)]
    differential = {name: list(img) for name, img in pres.differential.items()}
    differential["eps"] = [(pres.ring.one(), lazy(vertex))]
    grading_weights = None
    variable_weights = None
    if pres.grading_weights is not None:
        grading_weights = dict(pres.grading_weights)
        grading_weights["eps"] = (0,) * len(pres.variable_weights[0])
        variable_weights = list(pres.variable_weights)
    return Presentation(
        Quiver(pres.quiver.vertices, arrows),
        pres.ring,
        dict(pres.rules),
        differential,
        grading_weights=grading_weights,
        variable_weights=variable_weights,
    )


def relabel_presentation(
    pres: Presentation,
    vertex_map: Optional[dict] = None,
    arrow_map: Optional[dict] = None,
) -> Presentation:
    """Rename vertices and/or arrows everywhere; structure unchanged.

    Maps may be partial; unmentioned labels keep their names.
    """
    vmap = dict(vertex_map or {})
    amap = dict(arrow_map or {})

    def v(name: str) -> str:
        return vmap.get(name, name)

    def a(name: str) -> str:
        return amap.get(name, name)

    def path(p: Path) -> Path:
        if p.is_lazy:
            return Path((), v(p.vertex))
        return Path(tuple(a(x) for x in p.arrows), None)

    def pairs(ps):
        return [(coef, path(p)) for coef, p in ps]

    quiver = Quiver(
        tuple(v(x) for x in pres.quiver.vertices),
        tuple(
            Arrow(a(ar.name), v(ar.src), v(ar.tgt), ar.deg)
            for ar in pres.quiver.arrows
        ),
    )
    rules = {
        tuple(a(x) for x in lhs): pairs(rhs) for lhs, rhs in pres.rules.items()
    }
    diff = {a(name): pairs(img) for name, img in pres.differential.items()}
    grading = None
    if pres.grading_weights is not None:
        grading = {a(name): w for name, w in pres.grading_weights.items()}
    return Presentation(
        quiver,
        pres.ring,
        rules,
        diff,
        require_confluent=False,
        grading_weights=grading,
        variable_weights=pres.variable_weights,
    )


def same_presentation(p: Presentation, q: Presentation) -> bool:
    """Structural equality: same coefficients, vertices, arrows, rules,
    and differential (vertex/arrow listing order ignored)."""
    if p.ring != q.ring:
        return False
    if set(p.quiver.vertices) != set(q.quiver.vertices):
        return False
    if {a.name: (a.src, a.tgt, a.deg) for a in p.quiver.arrows} != {
        a.name: (a.src, a.tgt, a.deg) for a in q.quiver.arrows
    }:
        return False
    if set(p.rules) != set(q.rules):
        return False
    for lhs in p.rules:
        if sorted(p.rules[lhs], key=_pair_key) != sorted(
            q.rules[lhs], key=_pair_key
        ):
            return False
    if set(p.differential) != set(q.differential):
        return False
    for name in p.differential:
        if sorted(p.differential[name], key=_pair_key) != sorted(
            q.differential[name], key=_pair_key
        ):
            return False
    return True


def _pair_key(pair):
    coef, path = pair
    return (path.arrows, path.vertex or "", sorted(coef.terms.items()))


def tube_rank_closed_form(
    n: int, i: int, j: int, length_bound: int
) -> int:
    """Independent count of irreducible words L_i -> L_j up to a length
    bound in the cyclic-quiver algebra: exactly one forward (a) path per
    winding number and one backward (b) path, plus the lazy path on the
    diagonal."""
    m = n + 1
    count = 0
    fwd = (j - i) % m      # shortest a-path length
    back = (i - j) % m     # shortest b-path length
    length = fwd if fwd else m
    while length <= length_bound:
        count += 1
        length += m
    length = back if back else m
    while length <= length_bound:
        count += 1
        length += m
    if i == j:
        count += 1  # lazy path
    return count
