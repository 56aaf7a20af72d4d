"""Hyperbolic formal group law arithmetic and the formal group algebra.

The scalar home of every class value: rational functions in the law's
parameters and one generator x_i per simple root, where x_i stands for the
first-Chern-class symbol of the i-th simple root.  The hyperbolic law

    F(a, b) = (a + b - mu1*a*b) / (1 + mu2*a*b),        u := -mu2

is carried with explicit parameter bindings per mode:

    generic        mu1, mu2 free symbols
    additive       mu1 = mu2 = 0            (singular cohomology)
    multiplicative mu1 = 1, mu2 = 0         (K-theory)
    lorentz        mu1 = 0, mu2 = -u        (u a free symbol)
    hecke          mu1 = 1, mu2 = -t^2/(t^2+1)^2

The mode is an explicit argument everywhere, never ambient state, so that
limits between theories can be compared inside one process.  y_of builds
the symbol y_lambda for any root-lattice vector by iterated formal
addition (positive coordinates first, increasing generator index), with a
per-mode memo shared by all downstream class computations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ring import MultiPoly, RatFunc, VarRegistry
from .roots import Root, RootSystem, WeylElem, WrongType

__all__ = [
    "FglMode",
    "mode_for_system",
    "mode_raw",
    "MODE_TAGS",
    "fgl_add",
    "fgl_inverse",
    "y_of",
    "weyl_act",
    "kappa",
    "DegenerateDenominator",
    "WrongMode",
    "bracket_label",
    "bracket_root",
    "parse_bracket",
    "express_in_brackets",
    "render_brackets",
]

MODE_TAGS = ("generic", "additive", "multiplicative", "lorentz", "hecke")

_PARAM_VARS = {
    "generic": ("mu1", "mu2"),
    "additive": (),
    "multiplicative": (),
    "lorentz": ("u",),
    "hecke": ("t",),
}


class DegenerateDenominator(ArithmeticError):
    """A formal-group-law denominator vanished identically."""


class WrongMode(ValueError):
    """Operation requires a different formal-group-law mode."""


class FglMode:
    """A formal group law specialization bound to a variable registry."""

    def __init__(self, tag: str, registry: VarRegistry, root_vars: tuple):
        if tag not in MODE_TAGS:
            raise WrongMode(f"unknown mode {tag!r}")
        self.tag = tag
        self.registry = registry
        self.root_vars = root_vars
        one = registry.one
        zero = registry.zero
        if tag == "generic":
            self.mu1 = registry.var("mu1")
            self.mu2 = registry.var("mu2")
        elif tag == "additive":
            self.mu1, self.mu2 = zero, zero
        elif tag == "multiplicative":
            self.mu1, self.mu2 = one, zero
        elif tag == "lorentz":
            self.mu1 = zero
            self.mu2 = -registry.var("u")
        else:  # hecke
            t = registry.var("t")
            self.mu1 = one
            self.mu2 = -(t * t) / ((t * t + one) ** 2)
        self.u = -self.mu2
        self._y_cache: dict = {}
        self._x = tuple(registry.var(name) for name in root_vars)

    def x(self, pos: int) -> RatFunc:
        """Generator symbol for the simple root at position pos."""
        return self._x[pos]

    @property
    def n_roots(self) -> int:
        return len(self.root_vars)

    def require(self, tag: str) -> None:
        if self.tag != tag:
            raise WrongMode(f"operation requires {tag} mode, not {self.tag}")

    def __repr__(self) -> str:
        return f"FglMode({self.tag!r}, n={len(self.root_vars)})"


def mode_for_system(system: RootSystem, tag: str) -> FglMode:
    """Mode whose root variables x1..xn follow the system's generator order."""
    cache = getattr(system, "_mode_cache", None)
    if cache is None:
        cache = system._mode_cache = {}
    mode = cache.get(tag)
    if mode is None:
        root_vars = tuple(f"x{i+1}" for i in range(system.rank))
        registry = VarRegistry(_PARAM_VARS.get(tag, ()) + root_vars)
        mode = FglMode(tag, registry, root_vars)
        cache[tag] = mode
    return mode


def mode_raw(tag: str, var_names: Sequence[str]) -> FglMode:
    """Mode over explicitly named symbols (for law-level identities)."""
    var_names = tuple(var_names)
    registry = VarRegistry(_PARAM_VARS.get(tag, ()) + var_names)
    return FglMode(tag, registry, var_names)


def fgl_add(mode: FglMode, a: RatFunc, b: RatFunc) -> RatFunc:
    """Formal sum F(a, b) of two first-Chern-class symbols."""
    ab = a * b
    den = mode.registry.one + mode.mu2 * ab
    if den.is_zero:
        raise DegenerateDenominator("1 + mu2*a*b vanishes identically")
    return (a + b - mode.mu1 * ab) / den


def fgl_inverse(mode: FglMode, a: RatFunc) -> RatFunc:
    """Formal inverse: the unique i(a) with F(a, i(a)) = 0."""
    den = mode.registry.one - mode.mu1 * a
    if den.is_zero:
        raise DegenerateDenominator("1 - mu1*a vanishes identically")
    return -a / den


def y_of(mode: FglMode, coords: Sequence[int]) -> RatFunc:
    """The symbol y_lambda for a root-lattice vector in simple coordinates.

    Decomposition order is fixed: positive coordinates first, then
    negative ones, each in increasing generator position; memoized per
    (coords, mode).
    """
    coords = tuple(coords)
    cached = mode._y_cache.get(coords)
    if cached is not None:
        return cached
    acc = mode.registry.zero
    for pos, c in enumerate(coords):
        if c > 0:
            x = mode.x(pos)
            for _ in range(c):
                acc = fgl_add(mode, acc, x)
    for pos, c in enumerate(coords):
        if c < 0:
            xi = fgl_inverse(mode, mode.x(pos))
            for _ in range(-c):
                acc = fgl_add(mode, acc, xi)
    mode._y_cache[coords] = acc
    return acc


def y_neg_root(mode: FglMode, root: Root) -> RatFunc:
    """y_{-alpha}; the building block of every class value."""
    return y_of(mode, tuple(-c for c in root.coords))


def weyl_act(mode: FglMode, w: WeylElem, f: RatFunc) -> RatFunc:
    """Weyl action on scalars: substitutes x_i by y_{w(alpha_i)}."""
    if w.length == 0:
        return f
    used = f.num.used_vars() | f.den.used_vars()
    reg = mode.registry
    bindings = {}
    for pos, name in enumerate(mode.root_vars):
        if reg.index[name] not in used:
            continue
        target = w.apply(tuple(1 if j == pos else 0 for j in range(mode.n_roots)))
        bindings[name] = y_of(mode, target)
    if not bindings:
        return f
    return f.substitute(bindings)


def kappa(mode: FglMode, pos: int) -> RatFunc:
    """1/y_{-alpha_i} + 1/x_i; constant mu1 for the hyperbolic law."""
    neg = tuple(-1 if j == pos else 0 for j in range(mode.n_roots))
    return y_of(mode, neg).inv() + mode.x(pos).inv()


# ---------------------------------------------------------------------------
# Bracket notation.  [ij] names y_{-(e_i - e_j)} in type A and
# y_{-(e_j - e_i)} in types C/D (negative index = negated coordinate), so a
# bracket always denotes y of a negated positive root.  Display-only; the
# canonical serialization stays the ring rendering.
# ---------------------------------------------------------------------------


def bracket_label(system: RootSystem, root: Root) -> str:
    """Paper-style name of y_{-alpha} for a positive root alpha."""
    fam = system.spec.family
    if not root.positive:
        raise ValueError("bracket labels name positive roots")
    eps = root.eps
    if fam == "A":
        i = eps.index(1) + 1
        j = eps.index(-1) + 1
        return f"[{i}{j}]" if i <= 9 and j <= 9 else f"[{i},{j}]"
    if fam in ("C", "D"):
        support = [(d + 1, v) for d, v in enumerate(eps) if v]
        if len(support) == 1:
            (d, v), = support
            a, b = -d, d
        else:
            (d1, v1), (d2, v2) = support
            if v1 == -1 and v2 == 1:
                a, b = d1, d2
            elif v1 == 1 and v2 == 1:
                a, b = -d1, d2
            else:
                raise ValueError(f"unexpected positive root {eps}")
        sa, sb = str(a), str(b)
        if len(sa) == 1 and len(sb) == 1:
            return f"[{sa}{sb}]"
        return f"[{sa},{sb}]"
    raise WrongType(f"no bracket convention for family {fam}")


def bracket_root(system: RootSystem, a: int, b: int) -> Root:
    """Root named by the index pair of a bracket."""
    fam = system.spec.family
    dim = len(system.simple_eps[0])
    eps = [0] * dim
    if fam == "A":
        eps[a - 1] += 1
        eps[b - 1] -= 1
    elif fam in ("C", "D"):
        # [ab] = y_{-(e_b - e_a)} with e_{-i} = -e_i
        if b > 0:
            eps[b - 1] += 1
        else:
            eps[-b - 1] -= 1
        if a > 0:
            eps[a - 1] -= 1
        else:
            eps[-a - 1] += 1
    else:
        raise WrongType(f"no bracket convention for family {fam}")
    root = system.root_by_eps.get(tuple(eps))
    if root is None:
        raise ValueError(f"bracket ({a},{b}) does not name a root")
    return root


def parse_bracket(system: RootSystem, text: str) -> Root:
    """Parse "[13]", "[-1,2]" or "[-12]"-free forms back to a root."""
    body = text.strip().strip("[]")
    if "," in body:
        a_s, b_s = body.split(",")
        a, b = int(a_s), int(b_s)
    else:
        body = body.replace(" ", "")
        if body.startswith("-"):
            a, b = int(body[:2]), int(body[2:])
        else:
            a, b = int(body[0]), int(body[1:])
    return bracket_root(system, a, b)


def bracket_value(mode: FglMode, system: RootSystem, root: Root) -> RatFunc:
    return y_neg_root(mode, root)


def express_in_brackets(
    f: RatFunc,
    mode: FglMode,
    system: RootSystem,
    max_degree: int = None,
    max_u_power: int = 2,
    candidate_cap: int = 900,
):
    """Try to write f as an integer-u-polynomial in bracket monomials.

    Returns a list of (u_power, exponent_vector_over_positive_roots, coeff)
    or None if no combination within the bounds verifies.  The search
    solves an evaluation-based linear system and then checks the candidate
    exactly, so a non-None result is always a true identity.
    """
    pos = system.positive_roots
    if max_degree is None:
        max_degree = min(len(pos) + 1, 6)
    atoms = [y_neg_root(mode, r) for r in pos]
    monos = []
    for expo in _bounded_exponents(len(pos), max_degree):
        for e in range(max_u_power + 1):
            monos.append((e, expo))
    if len(monos) > candidate_cap:
        return None
    monos.sort(key=lambda m: (sum(m[1]), m[0], m[1]))
    u = mode.u
    names = mode.registry.names

    # phase 1: solve mod a large prime to locate the (sparse) support
    p = (1 << 31) - 1
    rng = _DetRand(20240911)
    rows_p, vals_p = [], []
    attempts = 0
    while len(rows_p) < len(monos) + 4 and attempts < 4 * (len(monos) + 8):
        attempts += 1
        assignment = {name: rng.next_int(2, p - 2) for name in names}
        try:
            fv = _eval_modp(f, assignment, p)
            uv = _eval_modp(u, assignment, p)
            atom_vals = [_eval_modp(a, assignment, p) for a in atoms]
        except ZeroDivisionError:
            continue
        row = []
        for e, expo in monos:
            v = pow(uv, e, p)
            for av, k in zip(atom_vals, expo):
                if k:
                    v = v * pow(av, k, p) % p
            row.append(v)
        rows_p.append(row)
        vals_p.append(fv)
    sol_p = _solve_modp(rows_p, vals_p, p)
    if sol_p is None:
        return None
    support = [k for k, c in enumerate(sol_p) if c]
    if not support:
        return [] if f.is_zero else None

    # phase 2: exact solve restricted to the support, over the rationals
    rows, values = [], []
    points = 0
    while points < len(support) + 3:
        assignment = {
            name: Fraction(rng.next_int(2, 97), rng.next_int(2, 67))
            for name in names
        }
        try:
            fv = _eval_all(f, assignment)
            uv = _eval_all(u, assignment)
            atom_vals = [_eval_all(a, assignment) for a in atoms]
        except ZeroDivisionError:
            continue
        row = []
        for k in support:
            e, expo = monos[k]
            v = uv**e
            for av, kk in zip(atom_vals, expo):
                if kk:
                    v *= av**kk
            row.append(v)
        rows.append(row)
        values.append(fv)
        points += 1
    sol = _solve_exact(rows, values)
    if sol is None:
        return None
    combo = [
        (monos[support[k]][0], monos[support[k]][1], c)
        for k, c in enumerate(sol)
        if c
    ]
    # exact verification
    total = mode.registry.zero
    for e, expo, c in combo:
        term = mode.registry.one.scale(c) * u**e
        for atom, k in zip(atoms, expo):
            if k:
                term = term * atom**k
        total = total + term
    if not (total == f):
        return None
    return combo


def render_brackets(
    f: RatFunc, mode: FglMode, system: RootSystem, **kwds
) -> str:
    """Paper-style display of f, falling back to the canonical rendering."""
    combo = None
    try:
        combo = express_in_brackets(f, mode, system, **kwds)
    except (WrongType, ValueError):
        combo = None
    if combo is None:
        return f.render()
    if not combo:
        return "0"
    pos = system.positive_roots
    parts = []
    for e, expo, c in combo:
        factors = []
        if e == 1:
            factors.append("u")
        elif e > 1:
            factors.append(f"u^{e}")
        for root, k in zip(pos, expo):
            lab = bracket_label(system, root)
            factors.append(lab if k == 1 else f"{lab}^{k}")
        body = "".join(factors)
        mag = abs(c)
        if not body:
            text = _q_str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{_q_str(mag)}{body}"
        if not parts:
            parts.append(f"-{text}" if c < 0 else text)
        else:
            parts.append(f"- {text}" if c < 0 else f"+ {text}")
    return " ".join(parts)


def _q_str(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _bounded_exponents(n: int, bound: int):
    if n == 0:
        yield ()
        return
    for head in range(bound + 1):
        for tail in _bounded_exponents(n - 1, bound - head):
            yield (head,) + tail


class _DetRand:
    """Tiny deterministic LCG so displays never depend on global state."""

    def __init__(self, seed: int):
        self.state = seed & 0xFFFFFFFF

    def next_int(self, lo: int, hi: int) -> int:
        self.state = (1103515245 * self.state + 12345) & 0x7FFFFFFF
        return lo + self.state % (hi - lo + 1)


def _eval_all(f: RatFunc, assignment: Mapping[str, Fraction]) -> Fraction:
    f = f.canonical()

    def ev(p: MultiPoly) -> Fraction:
        total = Fraction(0)
        names = p.registry.names
        for expo, c in p.terms.items():
            v = Fraction(c.numerator, c.denominator)
            for name, k in zip(names, expo):
                if k:
                    v *= assignment[name] ** k
            total += v
        return total

    den = ev(f.den)
    if den == 0:
        raise ZeroDivisionError
    return ev(f.num) / den


def _prod(items) -> Fraction:
    out = Fraction(1)
    for x in items:
        out *= x
    return out


def _solve_exact(rows, values):
    """Solve rows * c = values exactly; free variables pinned to zero."""
    m = len(rows)
    if not m:
        return None
    n = len(rows[0])
    mat = [list(map(Fraction, row)) + [Fraction(values[r])] for r, row in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(m):
            if i != r and mat[i][c]:
                factor = mat[i][c]
                mat[i] = [x - factor * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    # consistency
    for i in range(r, m):
        if mat[i][n]:
            return None
    sol = [Fraction(0)] * n
    for row_idx, c in enumerate(pivots):
        sol[c] = mat[row_idx][n]
    return sol
