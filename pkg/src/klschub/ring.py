"""Exact sparse multivariate rational arithmetic.

This is the scalar layer everything else computes in.  A polynomial is a
finite map from exponent vectors to nonzero rational coefficients:

    MultiPoly.terms : dict[tuple[int, ...], coeff]

with one exponent slot per variable of a fixed ``VarRegistry``.  Rational
functions are reduced pairs of such polynomials.  The representation is
canonical: numerator and denominator are coprime, and the denominator is
an integer-primitive polynomial whose leading coefficient under graded
lexicographic order is positive.  Two values are equal iff their stored
dictionaries are equal, which makes golden-string tests and table
comparisons exact.

Coefficients are arbitrary-precision rationals (gmpy2.mpq when available,
fractions.Fraction otherwise).  No floating point is used anywhere.

GCDs are computed by integer-content extraction followed by the heuristic
evaluation/reconstruction method, with a recursive primitive polynomial
remainder sequence as a deterministic fallback.  When the estimated cost
of a reduction exceeds a configurable bound, fractions are stored
unreduced and equality falls back to cross-multiplication; this guards
against pathological blowup without sacrificing correctness.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence, Union

try:
    from gmpy2 import gcd as _int_gcd, mpq as _Q, mpz as _Z
except ImportError:  # pragma: no cover - gmpy2 is normally installed
    from fractions import Fraction as _Q
    from math import gcd as _int_gcd

    _Z = int

__all__ = [
    "VarRegistry",
    "MultiPoly",
    "RatFunc",
    "DivisionByZero",
    "SubstitutionPole",
    "EvaluationPole",
    "set_gcd_cost_limit",
    "get_gcd_cost_limit",
]

Rational = Union[int, "_Q"]


def _Qc(x) -> "_Q":
    """Coerce ints, Fractions and mpqs to the coefficient type."""
    if isinstance(x, (int, _Z)) or type(x) is _Q:
        return _Q(x)
    num = getattr(x, "numerator", None)
    if num is not None:
        return _Q(num, x.denominator)
    return _Q(x)


class DivisionByZero(ZeroDivisionError):
    """Division by the zero rational function."""


class SubstitutionPole(ArithmeticError):
    """A substitution made a denominator vanish identically."""


class EvaluationPole(ArithmeticError):
    """A single-variable evaluation made a denominator vanish identically."""


# Reductions whose term-count product exceeds this bound are skipped and the
# fraction is kept unreduced (equality then uses cross-multiplication).
_GCD_COST_LIMIT = 4_000_000


def set_gcd_cost_limit(limit: int) -> None:
    global _GCD_COST_LIMIT
    _GCD_COST_LIMIT = int(limit)


def get_gcd_cost_limit() -> int:
    return _GCD_COST_LIMIT


class VarRegistry:
    """An ordered, immutable set of variable names.

    The order is fixed for the lifetime of a computation and determines the
    graded lexicographic monomial order, hence all canonical forms.
    """

    __slots__ = ("names", "index", "_zero", "_one", "_vars")

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        self.names = names
        self.index = {name: i for i, name in enumerate(names)}
        self._zero = None
        self._one = None
        self._vars = {}

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"VarRegistry({self.names!r})"

    def poly(self, terms: Mapping[tuple, Rational]) -> MultiPoly:
        clean = {}
        for expo, c in terms.items():
            expo = tuple(expo)
            if len(expo) != len(self.names):
                raise ValueError("exponent vector has wrong length")
            c = _Qc(c)
            if c:
                clean[expo] = c
        return MultiPoly(self, clean)

    def const_poly(self, c: Rational) -> MultiPoly:
        c = _Qc(c)
        if not c:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * len(self.names): c})

    def const(self, c: Rational) -> RatFunc:
        return RatFunc._make(self.const_poly(c), self.const_poly(1), True)

    @property
    def zero(self) -> RatFunc:
        if self._zero is None:
            self._zero = self.const(0)
        return self._zero

    @property
    def one(self) -> RatFunc:
        if self._one is None:
            self._one = self.const(1)
        return self._one

    def var(self, name: str) -> RatFunc:
        f = self._vars.get(name)
        if f is None:
            i = self.index[name]
            expo = tuple(1 if j == i else 0 for j in range(len(self.names)))
            f = RatFunc._make(
                MultiPoly(self, {expo: _Q(1)}), self.const_poly(1), True
            )
            self._vars[name] = f
        return f


def _grlex_key(expo: tuple) -> tuple:
    return (sum(expo), expo)


class MultiPoly:
    """Sparse multivariate polynomial over the rationals.

    Immutable after construction; ``terms`` never stores zero coefficients.
    """

    __slots__ = ("registry", "terms")

    def __init__(self, registry: VarRegistry, terms: dict):
        self.registry = registry
        self.terms = terms

    # -- basic queries -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_const(self) -> bool:
        if not self.terms:
            return True
        if len(self.terms) != 1:
            return False
        return not any(next(iter(self.terms)))

    def const_value(self):
        if not self.terms:
            return _Q(0)
        (expo, c), = self.terms.items()
        if any(expo):
            raise ValueError("not a constant polynomial")
        return c

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def used_vars(self) -> set:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return used

    def leading(self) -> tuple:
        """(exponent, coefficient) of the graded-lex leading term."""
        expo = max(self.terms, key=_grlex_key)
        return expo, self.terms[expo]

    # -- arithmetic ----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.registry is other.registry
            and self.terms == other.terms
        )

    __hash__ = None

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.registry, {e: -c for e, c in self.terms.items()})

    def __add__(self, other: MultiPoly) -> MultiPoly:
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly(self.registry, out)

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = -c
            else:
                s = s - c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly(self.registry, out)

    def __mul__(self, other: MultiPoly) -> MultiPoly:
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly(self.registry, {})
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                s = out.get(e)
                if s is None:
                    out[e] = c
                else:
                    s = s + c
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return MultiPoly(self.registry, out)

    def scale(self, c) -> MultiPoly:
        c = _Qc(c)
        if not c:
            return MultiPoly(self.registry, {})
        return MultiPoly(self.registry, {e: k * c for e, k in self.terms.items()})

    def __pow__(self, n: int) -> MultiPoly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.registry.const_poly(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- normal forms ----------------------------------------------------

    def int_normal(self) -> tuple:
        """Write self = c * P with P integer-primitive, positive leading coeff.

        Returns (c, P) where c is rational and P a MultiPoly with integer
        coprime coefficients.  The zero polynomial returns (0, 0).
        """
        if not self.terms:
            return _Q(0), self
        den_lcm = _Z(1)
        for c in self.terms.values():
            d = c.denominator
            den_lcm = den_lcm // _int_gcd(den_lcm, d) * d
        num_gcd = _Z(0)
        for c in self.terms.values():
            num_gcd = _int_gcd(num_gcd, c.numerator * den_lcm // c.denominator)
        content = _Q(num_gcd, den_lcm)
        lead = self.terms[max(self.terms, key=_grlex_key)]
        if lead < 0:
            content = -content
        inv = 1 / content
        prim = MultiPoly(
            self.registry, {e: c * inv for e, c in self.terms.items()}
        )
        return content, prim

    def render(self) -> str:
        """Canonical text form: terms in descending graded-lex order."""
        if not self.terms:
            return "0"
        parts = []
        for expo in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[expo]
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.registry.names, expo)
                if k
            )
            mag = abs(c)
            if not mono:
                body = _render_q(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_render_q(mag)}*{mono}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()})"


def _render_q(q) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# GCD machinery.  Internally polynomials are raw dicts with integer
# coefficients; MultiPoly wrappers are only built at the boundary.
# ---------------------------------------------------------------------------


def _dict_int_content(d: dict) -> "_Z":
    g = _Z(0)
    for c in d.values():
        g = _int_gcd(g, c)
        if g == 1:
            return _Z(1)
    return g


def _dict_primitive(d: dict) -> dict:
    g = _dict_int_content(d)
    lead = d[max(d, key=_grlex_key)]
    if lead < 0:
        g = -g
    if g == 1:
        return d
    return {e: c // g for e, c in d.items()}


def _dict_mul(a: dict, b: dict) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            elif e in out:
                del out[e]
    return out


def _dict_divides(d: dict, f: dict) -> dict:
    """Exact division f / d over the integers; None if not exact."""
    if not f:
        return {}
    de = max(d, key=_grlex_key)
    dc = d[de]
    rem = dict(f)
    quo = {}
    while rem:
        re = max(rem, key=_grlex_key)
        rc = rem[re]
        qe = tuple(x - y for x, y in zip(re, de))
        if any(k < 0 for k in qe):
            return None
        qc, leftover = divmod(rc, dc)
        if leftover:
            return None
        quo[qe] = qc
        for e, c in d.items():
            ee = tuple(x + y for x, y in zip(e, qe))
            s = rem.get(ee, 0) - c * qc
            if s:
                rem[ee] = s
            elif ee in rem:
                del rem[ee]
    return quo


def _dict_eval(d: dict, i: int, xi) -> dict:
    """Substitute variable i by the integer xi."""
    out = {}
    for e, c in d.items():
        k = e[i]
        if k:
            c = c * xi**k
            e = e[:i] + (0,) + e[i + 1 :]
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        elif e in out:
            del out[e]
    return out


def _dict_interp(h: dict, i: int, xi) -> dict:
    """Reconstruct a polynomial in variable i from its value at xi.

    Inverse of _dict_eval under the balanced base-xi digit expansion.
    """
    out = {}
    k = 0
    half = xi // 2
    while h:
        digit = {}
        nxt = {}
        for e, c in h.items():
            r = c % xi
            if r > half:
                r -= xi
            if r:
                digit[e] = r
            q = (c - r) // xi
            if q:
                nxt[e] = q
        for e, c in digit.items():
            out[e[:i] + (k,) + e[i + 1 :]] = c
        h = nxt
        k += 1
    return out


def _max_norm(d: dict) -> "_Z":
    return max(abs(c) for c in d.values()) if d else _Z(0)


def _heu_gcd(f: dict, g: dict, arity: int, depth: int = 0) -> dict:
    """Heuristic gcd of integer dicts, including integer content.

    The common integer content must be carried through the recursion: at an
    inner level it holds the image of gcd factors that involve only outer
    variables.  Returns None if six evaluation points all fail.
    """
    if not f:
        return dict(g)
    if not g:
        return dict(f)
    c = _int_gcd(_dict_int_content(f), _dict_int_content(g))
    fp = _dict_primitive(f)
    gp = _dict_primitive(g)
    fvars = {i for e in fp for i, k in enumerate(e) if k}
    gvars = {i for e in gp for i, k in enumerate(e) if k}
    if not fvars or not gvars:
        return {(0,) * arity: c}
    i = sorted(fvars | gvars)[0]
    xi = 2 * min(_max_norm(fp), _max_norm(gp)) + 29
    for _ in range(6):
        ff = _dict_eval(fp, i, xi)
        gg = _dict_eval(gp, i, xi)
        if ff and gg:
            h = _heu_gcd(ff, gg, arity, depth + 1)
            if h is not None:
                cand = _dict_primitive(_dict_interp(h, i, xi))
                if (
                    _dict_divides(cand, fp) is not None
                    and _dict_divides(cand, gp) is not None
                ):
                    if c != 1:
                        cand = {e: k * c for e, k in cand.items()}
                    return cand
        xi = xi * 73794 // 27011 + 17
    return None


def _prem(f: dict, g: dict, i: int, arity: int) -> dict:
    """Pseudo-remainder of f by g, both viewed as univariate in variable i."""

    def coeffs_by_deg(d):
        out = {}
        for e, c in d.items():
            out.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1 :]] = c
        return out

    def assemble(by_deg):
        out = {}
        for k, coef in by_deg.items():
            for e, c in coef.items():
                out[e[:i] + (k,) + e[i + 1 :]] = c
        return out

    gb = coeffs_by_deg(g)
    dg = max(gb)
    lc_g = gb[dg]
    rem = f
    while rem:
        rb = coeffs_by_deg(rem)
        dr = max(rb)
        if dr < dg:
            break
        lc_r = rb[dr]
        shift = dr - dg
        # rem = lc_g * rem - lc_r * x^shift * g
        t1 = _dict_mul(rem, assemble({0: lc_g}))
        shifted = {
            e[:i] + (e[i] + shift,) + e[i + 1 :]: c for e, c in g.items()
        }
        t2 = _dict_mul(shifted, assemble({0: lc_r}))
        rem = {}
        for e, c in t1.items():
            rem[e] = c
        for e, c in t2.items():
            s = rem.get(e, 0) - c
            if s:
                rem[e] = s
            elif e in rem:
                del rem[e]
    return rem


def _prs_gcd(f: dict, g: dict, arity: int) -> dict:
    """Primitive PRS gcd; deterministic fallback for _heu_gcd."""
    if not f:
        return _dict_primitive(g) if g else {}
    if not g:
        return _dict_primitive(f)
    fvars = {i for e in f for i, k in enumerate(e) if k}
    gvars = {i for e in g for i, k in enumerate(e) if k}
    if not fvars or not gvars:
        c = _int_gcd(_dict_int_content(f), _dict_int_content(g))
        return {(0,) * arity: c}
    i = sorted(fvars | gvars)[0]

    def content_in(d):
        coefs = {}
        for e, c in d.items():
            coefs.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1 :]] = c
        cont = {}
        for coef in coefs.values():
            cont = _poly_gcd_dict(cont, coef, arity)
            if len(cont) == 1 and not any(next(iter(cont))) and cont[next(iter(cont))] == 1:
                break
        return cont

    cf = content_in(f)
    cg = content_in(g)
    fp = _dict_divides(cf, f)
    gp = _dict_divides(cg, g)
    cont = _poly_gcd_dict(cf, cg, arity)
    a, b = fp, gp
    if max(e[i] for e in a) < max(e[i] for e in b):
        a, b = b, a
    while True:
        r = _prem(a, b, i, arity)
        if not r:
            break
        a, b = b, _dict_primitive(r)
    # b may still carry content in the remaining variables
    b = _dict_divides(content_in(b), b)
    return _dict_primitive(_dict_mul(cont, b))


def _poly_gcd_dict(f: dict, g: dict, arity: int) -> dict:
    if not f:
        return _dict_primitive(g) if g else {}
    if not g:
        return _dict_primitive(f)
    if f == g:
        return _dict_primitive(f)
    # shared monomial factor
    fmin = [min(e[i] for e in f) for i in range(arity)]
    gmin = [min(e[i] for e in g) for i in range(arity)]
    shared = tuple(min(a, b) for a, b in zip(fmin, gmin))
    if any(fmin):
        f = {tuple(x - m for x, m in zip(e, fmin)): c for e, c in f.items()}
    if any(gmin):
        g = {tuple(x - m for x, m in zip(e, gmin)): c for e, c in g.items()}
    f = _dict_primitive(f)
    g = _dict_primitive(g)
    if len(f) == 1 or len(g) == 1:
        c = _int_gcd(_dict_int_content(f), _dict_int_content(g))
        gcd = {shared: c}
        return gcd
    if f == g:
        h = f
    else:
        h = _heu_gcd(f, g, arity)
        if h is None:
            h = _prs_gcd(f, g, arity)
    if any(shared):
        h = {tuple(x + m for x, m in zip(e, shared)): c for e, c in h.items()}
    return h


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Canonical gcd: integer-primitive with positive grlex leading coeff."""
    _, pa = a.int_normal()
    _, pb = b.int_normal()
    fa = {e: c.numerator for e, c in pa.terms.items()}
    fb = {e: c.numerator for e, c in pb.terms.items()}
    h = _poly_gcd_dict(fa, fb, len(a.registry))
    return MultiPoly(a.registry, {e: _Q(c) for e, c in h.items()})


def poly_divexact(f: MultiPoly, d: MultiPoly) -> MultiPoly:
    """Exact division by a divisor that is known to divide f."""
    if f.is_zero:
        return f
    if d.is_zero:
        raise DivisionByZero("polynomial division by zero")
    de, dc = d.leading()
    rem = dict(f.terms)
    quo = {}
    while rem:
        re = max(rem, key=_grlex_key)
        rc = rem[re]
        qe = tuple(x - y for x, y in zip(re, de))
        if any(k < 0 for k in qe):
            raise ArithmeticError("inexact polynomial division")
        qc = rc / dc
        quo[qe] = qc
        for e, c in d.terms.items():
            ee = tuple(x + y for x, y in zip(e, qe))
            s = rem.get(ee, 0) - c * qc
            if s:
                rem[ee] = s
            elif ee in rem:
                del rem[ee]
    return MultiPoly(f.registry, quo)


# ---------------------------------------------------------------------------
# Rational functions.
# ---------------------------------------------------------------------------


class RatFunc:
    """Rational function in canonical reduced form.

    Construct through registry helpers or arithmetic; the two-argument
    constructor reduces num/den to canonical form.
    """

    __slots__ = ("num", "den", "reduced")

    def __init__(self, num: MultiPoly, den: MultiPoly, _reduced: bool = False):
        if den.is_zero:
            raise DivisionByZero("zero denominator")
        if _reduced:
            self.num, self.den, self.reduced = num, den, True
            return
        f = _normalize(num, den)
        self.num, self.den, self.reduced = f

    @staticmethod
    def _make(num: MultiPoly, den: MultiPoly, reduced: bool) -> RatFunc:
        obj = object.__new__(RatFunc)
        obj.num, obj.den, obj.reduced = num, den, reduced
        return obj

    @property
    def registry(self) -> VarRegistry:
        return self.num.registry

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self) -> bool:
        return not self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.reduced and self.num.terms == self.den.terms

    def is_const(self) -> bool:
        f = self.canonical()
        return f.num.is_const and f.den.is_const

    def const_value(self):
        f = self.canonical()
        return f.num.const_value() / f.den.const_value()

    def canonical(self) -> RatFunc:
        """Force full reduction regardless of the cost bound."""
        if self.reduced:
            return self
        num, den, _ = _normalize(self.num, self.den, force=True)
        return RatFunc._make(num, den, True)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: RatFunc) -> RatFunc:
        if self.num.is_zero:
            return other
        if other.num.is_zero:
            return self
        if not (self.reduced and other.reduced):
            return RatFunc(
                self.num * other.den + other.num * self.den,
                self.den * other.den,
            )
        if self.den.terms == other.den.terms:
            num = self.num + other.num
            return RatFunc(num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.is_const:
            num = self.num * other.den + other.num * self.den
            den = self.den * other.den
            return _scaled(num, den)
        db = poly_divexact(other.den, g)
        da = poly_divexact(self.den, g)
        num = self.num * db + other.num * da
        h = poly_gcd(num, g)
        if not h.is_const:
            num = poly_divexact(num, h)
            g = poly_divexact(g, h)
        den = da * db * g
        return _scaled(num, den)

    def __neg__(self) -> RatFunc:
        return RatFunc._make(-self.num, self.den, self.reduced)

    def __sub__(self, other: RatFunc) -> RatFunc:
        return self + (-other)

    def __mul__(self, other: RatFunc) -> RatFunc:
        if self.num.is_zero or other.num.is_zero:
            return self.registry.zero
        if not (self.reduced and other.reduced):
            return RatFunc(self.num * other.num, self.den * other.den)
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        na = self.num if g1.is_const else poly_divexact(self.num, g1)
        db = other.den if g1.is_const else poly_divexact(other.den, g1)
        nb = other.num if g2.is_const else poly_divexact(other.num, g2)
        da = self.den if g2.is_const else poly_divexact(self.den, g2)
        return _scaled(na * nb, da * db)

    def __truediv__(self, other: RatFunc) -> RatFunc:
        if other.num.is_zero:
            raise DivisionByZero("division by the zero rational function")
        flipped = RatFunc._make(other.den, other.num, other.reduced)
        return self * flipped

    def inv(self) -> RatFunc:
        if self.num.is_zero:
            raise DivisionByZero("inverse of the zero rational function")
        return _scaled(self.den, self.num) if self.reduced else RatFunc(self.den, self.num)

    def __pow__(self, n: int) -> RatFunc:
        if n < 0:
            return self.inv() ** (-n)
        result = self.registry.one
        base = self
        while n:
            if n & 1:
                result = result * base
            if n > 1:
                base = base * base
            n >>= 1
        return result

    def scale(self, c: Rational) -> RatFunc:
        c = _Qc(c)
        if not c:
            return self.registry.zero
        return RatFunc(self.num.scale(c), self.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.reduced and other.reduced:
            return self.num == other.num and self.den == other.den
        return (self.num * other.den) == (other.num * self.den)

    __hash__ = None

    # -- substitution ------------------------------------------------------

    def substitute(self, bindings: Mapping[str, RatFunc]) -> RatFunc:
        """Simultaneous substitution; unbound variables are unchanged."""
        if not bindings:
            return self
        reg = self.registry
        values = {}
        for name, val in bindings.items():
            values[reg.index[name]] = val
        num = _poly_substitute(self.num, values)
        den = _poly_substitute(self.den, values)
        if den.is_zero:
            raise SubstitutionPole("denominator vanishes under substitution")
        return num / den

    def eval_at(self, name: str, value: Rational) -> RatFunc:
        """Specialize one variable to a rational constant."""
        f = self.canonical()
        reg = f.registry
        i = reg.index[name]
        value = _Qc(value)

        def ev(p: MultiPoly) -> MultiPoly:
            out = {}
            for e, c in p.terms.items():
                k = e[i]
                if k:
                    c = c * value**k
                    e = e[:i] + (0,) + e[i + 1 :]
                if not c:
                    continue
                s = out.get(e)
                if s is None:
                    out[e] = c
                else:
                    s = s + c
                    if s:
                        out[e] = s
                    else:
                        del out[e]
            return MultiPoly(reg, out)

        den = ev(f.den)
        if den.is_zero:
            raise EvaluationPole(f"denominator vanishes at {name} = {value}")
        return RatFunc(ev(f.num), den)

    def map_registry(self, target: VarRegistry, rename: Mapping[str, str] | None = None) -> RatFunc:
        """Re-express over another registry; all used variables must map."""
        rename = rename or {}
        src = self.registry.names
        cols = []
        for name in src:
            name2 = rename.get(name, name)
            cols.append(target.index.get(name2))

        def conv(p: MultiPoly) -> MultiPoly:
            out = {}
            for e, c in p.terms.items():
                ee = [0] * len(target)
                for i, k in enumerate(e):
                    if not k:
                        continue
                    j = cols[i]
                    if j is None:
                        raise ValueError(
                            f"variable {src[i]!r} not present in target registry"
                        )
                    ee[j] = k
                out[tuple(ee)] = c
            return MultiPoly(target, out)

        f = self.canonical()
        return RatFunc._make(conv(f.num), conv(f.den), True)

    # -- rendering ---------------------------------------------------------

    def render(self) -> str:
        f = self.canonical()
        if f.den.is_const and f.den.const_value() == 1:
            return f.num.render()
        return f"({f.num.render()})/({f.den.render()})"

    def __repr__(self) -> str:
        return f"RatFunc({self.render()})"


def _scaled(num: MultiPoly, den: MultiPoly) -> RatFunc:
    """Canonicalize a coprime num/den pair (denominator scaling only)."""
    c, prim = den.int_normal()
    if c == 1:
        return RatFunc._make(num, prim, True)
    return RatFunc._make(num.scale(1 / c), prim, True)


def _normalize(num: MultiPoly, den: MultiPoly, force: bool = False):
    if num.is_zero:
        return num, num.registry.const_poly(1), True
    if den.is_const:
        c = den.const_value()
        return num.scale(1 / c), num.registry.const_poly(1), True
    if not force and len(num.terms) * len(den.terms) > _GCD_COST_LIMIT:
        return num, den, False
    g = poly_gcd(num, den)
    if not g.is_const:
        num = poly_divexact(num, g)
        den = poly_divexact(den, g)
    f = _scaled(num, den)
    return f.num, f.den, True


def _poly_substitute(p: MultiPoly, values: Mapping[int, RatFunc]) -> RatFunc:
    reg = p.registry
    if p.is_zero:
        return reg.zero
    powers = {i: {0: reg.one} for i in values}
    result = reg.zero
    for e, c in p.terms.items():
        residual = {}
        factor = None
        for i, k in enumerate(e):
            if not k:
                continue
            if i in values:
                cache = powers[i]
                if k not in cache:
                    pw = cache[max(cache)]
                    for j in range(max(cache), k):
                        pw = pw * values[i]
                        cache[j + 1] = pw
                term_pw = cache[k]
                factor = term_pw if factor is None else factor * term_pw
            else:
                residual[i] = k
        mono = MultiPoly(
            reg,
            {
                tuple(residual.get(i, 0) for i in range(len(reg))): _Q(c)
            },
        )
        term = RatFunc._make(mono, reg.const_poly(1), True)
        if factor is not None:
            term = term * factor
        result = result + term
    return result
