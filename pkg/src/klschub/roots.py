"""Root systems and Weyl groups of types A, B, C, D (any rank) and G2.

Conventions follow the hyperbolic Schubert-calculus setting this package
computes in:

* type A_n acts on Z^(n+1) with simple roots e_i - e_{i+1}, generators
  labelled 1..n, and one-line notation w = i_1...i_m meaning w(k) = i_k;
* types B_n/C_n/D_n act on Z^n by signed permutations with the special
  generator labelled 0 first: alpha_0 = e_1 (B), 2e_1 (C), e_1+e_2 (D),
  and alpha_j = e_{j+1} - e_j for j = 1..n-1;
* G2 is realized with the short root e_1-e_2 and long root -2e_1+e_2+e_3.

Elements are stored by their integer matrix action on simple-root
coordinates, which composes and hashes cheaply; windows, shortlex reduced
words, lengths and inverses are derived and cached.  Signed permutations
additionally carry the extended window on positions -(n-1),...,0,...,n
with i_{-(j-1)} = -i_j, which makes position 0 behave exactly like the
other positions for the push-pull operator indexed 0.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "CartanSpec",
    "Root",
    "WeylElem",
    "RootSystem",
    "build",
    "UnsupportedSpec",
    "WrongType",
    "IndexOutOfRange",
    "GROUP_SIZE_CAP",
]

GROUP_SIZE_CAP = 10**6


class UnsupportedSpec(ValueError):
    """Family/rank combination outside the implemented range."""


class WrongType(TypeError):
    """Operation applied to a root system of the wrong family."""


class IndexOutOfRange(IndexError):
    """Coset or function index outside its documented range."""


class CartanSpec:
    """A validated (family, rank) pair."""

    __slots__ = ("family", "rank")

    _MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "G2": 2}

    def __init__(self, family: str, rank: int):
        family = str(family).upper()
        if family not in self._MIN_RANK:
            raise UnsupportedSpec(f"unknown family {family!r}")
        rank = int(rank)
        if family == "G2" and rank != 2:
            raise UnsupportedSpec("G2 has rank 2")
        if rank < self._MIN_RANK[family]:
            raise UnsupportedSpec(f"family {family} needs rank >= {self._MIN_RANK[family]}")
        self.family = family
        self.rank = rank

    def __repr__(self) -> str:
        return f"CartanSpec({self.family!r}, {self.rank})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CartanSpec)
            and self.family == other.family
            and self.rank == other.rank
        )

    def __hash__(self) -> int:
        return hash((self.family, self.rank))


class Root:
    """A root, stored both in simple-root coordinates and ambient ones."""

    __slots__ = ("coords", "eps", "positive")

    def __init__(self, coords: tuple, eps: tuple, positive: bool):
        self.coords = coords
        self.eps = eps
        self.positive = positive

    def __neg__(self) -> "Root":
        return Root(
            tuple(-c for c in self.coords),
            tuple(-c for c in self.eps),
            not self.positive,
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Root) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"Root{self.coords}"


class WeylElem:
    """Weyl group element, identified by its action on simple roots."""

    __slots__ = (
        "system",
        "rows",
        "index",
        "length",
        "_word",
        "_window",
        "_inverse",
        "_hash",
    )

    def __init__(self, system: "RootSystem", rows: tuple, index: int, length: int):
        self.system = system
        self.rows = rows
        self.index = index
        self.length = length
        self._word = None
        self._window = None
        self._inverse = None
        self._hash = hash(rows)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return self is other or (
            isinstance(other, WeylElem)
            and self.system is other.system
            and self.rows == other.rows
        )

    def apply(self, coords: Sequence[int]) -> tuple:
        """Image of a root-lattice vector in simple-root coordinates."""
        return tuple(sum(r * c for r, c in zip(row, coords)) for row in self.rows)

    def apply_root(self, root: Root) -> Root:
        return self.system.root_by_coords[self.apply(root.coords)]

    @property
    def inverse(self) -> "WeylElem":
        if self._inverse is None:
            self._inverse = self.system._compute_inverse(self)
        return self._inverse

    @property
    def word(self) -> tuple:
        """Shortlex-minimal reduced word, by repeated left-descent extraction."""
        if self._word is None:
            self._word = self.system._shortlex_word(self)
        return self._word

    @property
    def action(self) -> tuple:
        """Images of all simple roots, in simple-root coordinates."""
        n = len(self.rows)
        return tuple(
            tuple(self.rows[r][c] for r in range(n)) for c in range(n)
        )

    @property
    def window(self) -> tuple:
        """Signed one-line notation (classical families only)."""
        if self._window is None:
            self._window = self.system._derive_window(self)
        return self._window

    def extended_window(self, position: int) -> int:
        """Type-C bijection on -(n-1),...,0,...,n with i_{-(j-1)} = -i_j."""
        if position >= 1:
            return self.window[position - 1]
        return -self.window[-position]

    def one_line(self) -> str:
        if self.system.spec.family != "A":
            raise WrongType("one-line notation is for type A")
        return "".join(str(i) for i in self.window)

    def window_str(self) -> str:
        return " ".join(str(i) for i in self.window)

    def word_str(self) -> str:
        return ",".join(str(i) for i in self.word)

    def text(self) -> str:
        """Canonical text form used by the CLI and JSON tables."""
        fam = self.system.spec.family
        if fam == "A":
            return self.one_line()
        if fam in ("B", "C", "D"):
            return self.window_str()
        return self.word_str()

    def descends_left(self, i: int) -> bool:
        col = self.inverse._column(self.system.gen_pos[i])
        return all(c <= 0 for c in col)

    def descends_right(self, i: int) -> bool:
        col = self._column(self.system.gen_pos[i])
        return all(c <= 0 for c in col)

    def _column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def __mul__(self, other: "WeylElem") -> "WeylElem":
        return self.system.mul(self, other)

    def __repr__(self) -> str:
        fam = self.system.spec.family
        body = self.word_str() if self.length else "id"
        return f"<{fam}{self.system.spec.rank} {body}>"


def _mat_mul(a: tuple, b: tuple) -> tuple:
    n = len(a)
    bt = tuple(tuple(b[r][c] for r in range(n)) for c in range(n))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def _simple_roots_eps(spec: CartanSpec):
    fam, n = spec.family, spec.rank
    if fam == "A":
        dim = n + 1
        labels = tuple(range(1, n + 1))
        simples = []
        for i in range(1, n + 1):
            v = [0] * dim
            v[i - 1], v[i] = 1, -1
            simples.append(tuple(v))
        return labels, tuple(simples)
    if fam in ("B", "C", "D"):
        dim = n
        labels = (0,) + tuple(range(1, n))
        first = [0] * dim
        if fam == "B":
            first[0] = 1
        elif fam == "C":
            first[0] = 2
        else:
            first[0], first[1] = 1, 1
        simples = [tuple(first)]
        for j in range(1, n):
            v = [0] * dim
            v[j], v[j - 1] = 1, -1
            simples.append(tuple(v))
        return labels, tuple(simples)
    # G2: short alpha_1, long alpha_2, inside the A_2 ambient space
    return (1, 2), ((1, -1, 0), (-2, 1, 1))


class RootSystem:
    """Fully enumerated root system with its Weyl group.

    Built once via :func:`build`; all tables are immutable afterwards and
    queries are read-only.
    """

    def __init__(self, spec: CartanSpec, size_cap: int = GROUP_SIZE_CAP):
        self.spec = spec
        self.gen_labels, self.simple_eps = _simple_roots_eps(spec)
        self.rank = len(self.gen_labels)
        self.gen_pos = {lab: i for i, lab in enumerate(self.gen_labels)}
        # invariant form on simple-root coordinates, via the ambient dot
        self.form = tuple(
            tuple(sum(a * b for a, b in zip(u, v)) for v in self.simple_eps)
            for u in self.simple_eps
        )
        # cartan[i][j] = <alpha_j, alpha_i^vee>
        self.cartan = tuple(
            tuple(
                _exact_div(2 * self.form[i][j], self.form[i][i])
                for j in range(self.rank)
            )
            for i in range(self.rank)
        )
        self._enumerate_roots()
        self._enumerate_group(size_cap)
        self._bruhat_cache = {}
        self._refl_cache = None

    # -- construction -------------------------------------------------

    def _reflect_coords(self, i: int, coords: Sequence[int]) -> tuple:
        pairing = sum(self.cartan[i][j] * c for j, c in enumerate(coords))
        out = list(coords)
        out[i] -= pairing
        return tuple(out)

    def _enumerate_roots(self) -> None:
        seed = [
            tuple(1 if j == i else 0 for j in range(self.rank))
            for i in range(self.rank)
        ]
        seen = set(seed)
        queue = list(seed)
        while queue:
            v = queue.pop()
            for i in range(self.rank):
                w = self._reflect_coords(i, v)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        roots = []
        for coords in seen:
            if all(c >= 0 for c in coords):
                positive = True
            elif all(c <= 0 for c in coords):
                positive = False
            else:
                raise AssertionError(f"root with mixed signs: {coords}")
            eps = tuple(
                sum(c * s[d] for c, s in zip(coords, self.simple_eps))
                for d in range(len(self.simple_eps[0]))
            )
            roots.append(Root(coords, eps, positive))
        roots.sort(key=lambda r: (not r.positive, sum(r.coords), r.coords))
        self.roots = tuple(roots)
        self.positive_roots = tuple(r for r in roots if r.positive)
        self.root_by_coords = {r.coords: r for r in roots}
        self.root_by_eps = {r.eps: r for r in roots}
        self.num_positive = len(self.positive_roots)

    def _gen_rows(self, i: int) -> tuple:
        n = self.rank
        return tuple(
            tuple(
                (1 if r == c else 0) - (self.cartan[i][c] if r == i else 0)
                for c in range(n)
            )
            for r in range(n)
        )

    def _enumerate_group(self, size_cap: int) -> None:
        n = self.rank
        ident = tuple(
            tuple(1 if r == c else 0 for c in range(n)) for r in range(n)
        )
        gen_rows = [self._gen_rows(i) for i in range(n)]
        e = WeylElem(self, ident, 0, 0)
        e._inverse = e
        self.identity = e
        by_rows = {ident: e}
        elements = [e]
        self._right_tables = {}
        self._left_tables = {}
        frontier = [e]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(n):
                    rows = _mat_mul(w.rows, gen_rows[i])
                    known = by_rows.get(rows)
                    if known is None:
                        if len(elements) >= size_cap:
                            raise UnsupportedSpec(
                                f"Weyl group exceeds size cap {size_cap}"
                            )
                        known = WeylElem(self, rows, len(elements), w.length + 1)
                        by_rows[rows] = known
                        elements.append(known)
                        nxt.append(known)
            frontier = nxt
        self.elements = tuple(elements)
        self.by_rows = by_rows
        self.order = len(elements)
        self.gens = {
            lab: by_rows[gen_rows[self.gen_pos[lab]]] for lab in self.gen_labels
        }
        self._gen_rows_list = gen_rows
        longest = [w for w in elements if w.length == self.num_positive]
        if len(longest) != 1:
            raise AssertionError("longest element not unique")
        self.longest = longest[0]
        if self.spec.family in ("A", "B", "C", "D"):
            self.by_window = {w.window: w for w in elements}

    # -- group operations ------------------------------------------------

    def mul(self, u: WeylElem, v: WeylElem) -> WeylElem:
        if v.length == 0:
            return u
        if u.length == 0:
            return v
        return self.by_rows[_mat_mul(u.rows, v.rows)]

    def right_gen(self, w: WeylElem, i: int) -> WeylElem:
        table = self._right_tables.get(i)
        if table is None:
            pos = self.gen_pos[i]
            rows = self._gen_rows_list[pos]
            table = [
                self.by_rows[_mat_mul(x.rows, rows)] for x in self.elements
            ]
            self._right_tables[i] = table
        return table[w.index]

    def left_gen(self, i: int, w: WeylElem) -> WeylElem:
        table = self._left_tables.get(i)
        if table is None:
            pos = self.gen_pos[i]
            rows = self._gen_rows_list[pos]
            table = [
                self.by_rows[_mat_mul(rows, x.rows)] for x in self.elements
            ]
            self._left_tables[i] = table
        return table[w.index]

    def _compute_inverse(self, w: WeylElem) -> WeylElem:
        cur = w
        inv = self.identity
        while cur.length:
            i = next(
                lab
                for lab in self.gen_labels
                if all(c <= 0 for c in cur._column(self.gen_pos[lab]))
            )
            # i is a right descent of cur; stripping them in order yields
            # w * s_{a_1} ... s_{a_k} = id, so w^{-1} = s_{a_1} ... s_{a_k}
            cur = self.right_gen(cur, i)
            inv = self.right_gen(inv, i)
        w._inverse = inv
        inv._inverse = w
        return inv

    def _shortlex_word(self, w: WeylElem) -> tuple:
        word = []
        cur = w
        while cur.length:
            i = next(lab for lab in self.gen_labels if cur.descends_left(lab))
            word.append(i)
            cur = self.left_gen(i, cur)
        return tuple(word)

    def element_from_word(self, word: Iterable[int]) -> WeylElem:
        w = self.identity
        for i in word:
            if i not in self.gen_pos:
                raise IndexOutOfRange(f"no generator labelled {i}")
            w = self.right_gen(w, i)
        return w

    def elements_sorted(self) -> tuple:
        return tuple(sorted(self.elements, key=lambda w: (w.length, w.word)))

    # -- windows ---------------------------------------------------------

    def _derive_window(self, w: WeylElem) -> tuple:
        fam = self.spec.family
        if fam == "G2":
            raise WrongType("G2 has no window notation")
        # images of simple roots in the ambient basis
        imgs = []
        for c in range(self.rank):
            col = [w.rows[r][c] for r in range(self.rank)]
            imgs.append(
                tuple(
                    sum(k * s[d] for k, s in zip(col, self.simple_eps))
                    for d in range(len(self.simple_eps[0]))
                )
            )
        if fam == "A":
            # w(e_i - e_{i+1}) has +1 at position w(i)
            out = []
            for v in imgs:
                out.append(v.index(1) + 1)
            out.append(imgs[-1].index(-1) + 1)
            return tuple(out)
        # signed permutations: recover w(e_1) from the special root, then chain
        if fam == "B":
            first = imgs[0]
        elif fam == "C":
            first = tuple(_exact_div(x, 2) for x in imgs[0])
        else:
            first = tuple(_exact_div(a - b, 2) for a, b in zip(imgs[0], imgs[1]))
        out = [_signed_index(first)]
        cur = first
        for j in range(1, self.rank):
            cur = tuple(a + b for a, b in zip(imgs[j], cur))
            out.append(_signed_index(cur))
        return tuple(out)

    def element_from_window(self, window: Sequence[int]) -> WeylElem:
        w = self.by_window.get(tuple(window))
        if w is None:
            raise IndexOutOfRange(f"no element with window {tuple(window)}")
        return w

    # -- Bruhat order ------------------------------------------------------

    def bruhat_leq(self, v: WeylElem, w: WeylElem) -> bool:
        """Strong Bruhat order, via the subword property on w's word."""
        if v is w:
            return True
        if v.length >= w.length:
            return False
        if v.length == 0:
            return True
        key = (v.index, w.index)
        cached = self._bruhat_cache.get(key)
        if cached is not None:
            return cached
        i = w.word[0]
        sw = self.left_gen(i, w)
        sv = self.left_gen(i, v)
        if sv.length < v.length:
            out = self.bruhat_leq(sv, sw)
        else:
            out = self.bruhat_leq(v, sw)
        self._bruhat_cache[key] = out
        return out

    def bruhat_interval_below(self, w: WeylElem) -> tuple:
        return tuple(v for v in self.elements if self.bruhat_leq(v, w))

    # -- reflections and inversion sets -------------------------------------

    def reflection(self, root: Root) -> WeylElem:
        """The reflection s_beta as a group element."""
        if self._refl_cache is None:
            self._refl_cache = {}
        cached = self._refl_cache.get(root.coords)
        if cached is not None:
            return cached
        n = self.rank
        beta = root.coords
        bb = _bilinear(self.form, beta, beta)
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                pairing = _exact_div(
                    2 * _bilinear_col(self.form, c, beta), bb
                )
                row.append((1 if r == c else 0) - pairing * beta[r])
            rows.append(tuple(row))
        elem = self.by_rows[tuple(rows)]
        self._refl_cache[root.coords] = elem
        self._refl_cache[tuple(-x for x in beta)] = elem
        return elem

    def pos_pos_set(self, w: WeylElem) -> tuple:
        """Positive roots alpha with w^{-1}(alpha) still positive."""
        inv = w.inverse
        out = []
        for alpha in self.positive_roots:
            img = inv.apply(alpha.coords)
            if all(c >= 0 for c in img):
                out.append(alpha)
        return tuple(out)

    # -- type-specific combinatorics ---------------------------------------

    def highest_coset_rep(self, m: int) -> WeylElem:
        """Highest representative of the W_n/W_{n-1} coset with w(n) = m."""
        fam = self.spec.family
        if fam == "A":
            n = self.spec.rank + 1
            if not 2 <= m <= n:
                raise IndexOutOfRange(f"type A needs 2 <= m <= {n}")
            prefix = sorted(set(range(1, n + 1)) - {m}, reverse=True)
            return self.element_from_window(tuple(prefix) + (m,))
        if fam == "C":
            n = self.spec.rank
            if m == 0 or not -(n - 1) <= m <= n:
                raise IndexOutOfRange(
                    f"type C needs m in -(n-1)..-1, 1..n for n = {n}"
                )
            prefix = sorted(set(range(1, n + 1)) - {abs(m)})
            return self.element_from_window(
                tuple(-a for a in prefix) + (m,)
            )
        raise WrongType("highest_coset_rep is defined for types A and C")

    def avoids_patterns_A(self, w: WeylElem) -> bool:
        """True iff the one-line notation avoids 3412 and 4231."""
        if self.spec.family != "A":
            raise WrongType("pattern avoidance is for type A")
        win = w.window
        n = len(win)
        for a in range(n):
            for b in range(a + 1, n):
                for c in range(b + 1, n):
                    for d in range(c + 1, n):
                        p = (win[a], win[b], win[c], win[d])
                        if _matches(p, (3, 4, 1, 2)) or _matches(p, (4, 2, 3, 1)):
                            return False
        return True


def _matches(quad: tuple, pattern: tuple) -> bool:
    order = sorted(range(4), key=lambda k: quad[k])
    rel = [0] * 4
    for rank, k in enumerate(order, start=1):
        rel[k] = rank
    return tuple(rel) == pattern


def _signed_index(v: tuple) -> int:
    for d, x in enumerate(v):
        if x == 1:
            return d + 1
        if x == -1:
            return -(d + 1)
    raise AssertionError(f"not a signed unit vector: {v}")


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise AssertionError(f"inexact division {a}/{b}")
    return q


def _bilinear(form: tuple, u: Sequence[int], v: Sequence[int]) -> int:
    return sum(
        ui * form[i][j] * vj
        for i, ui in enumerate(u)
        if ui
        for j, vj in enumerate(v)
        if vj
    )


def _bilinear_col(form: tuple, c: int, v: Sequence[int]) -> int:
    return sum(form[c][j] * vj for j, vj in enumerate(v) if vj)


_SYSTEM_CACHE: dict = {}


def build(spec: CartanSpec, size_cap: int = GROUP_SIZE_CAP) -> RootSystem:
    """Build (and cache) the root system and Weyl group for a spec."""
    key = (spec.family, spec.rank, size_cap)
    sys_ = _SYSTEM_CACHE.get(key)
    if sys_ is None:
        sys_ = RootSystem(spec, size_cap)
        _SYSTEM_CACHE[key] = sys_
    return sys_


def parse_element(system: RootSystem, text: str) -> WeylElem:
    """Parse an element string: s-sequence, one-line (A) or window (B/C/D).

    Accepted forms: "s1,s0,s1" (product of generators), "312" (type A
    one-line), "2 -1 3" or "2,-1,3" (signed window).
    """
    text = text.strip()
    if not text or text in ("id", "e"):
        return system.identity
    if "s" in text:
        word = [int(tok.strip().lstrip("s")) for tok in text.split(",")]
        return system.element_from_word(word)
    fam = system.spec.family
    seps = [tok for tok in text.replace(",", " ").split() if tok]
    if len(seps) > 1 or "-" in text:
        if fam == "A":
            window = tuple(int(tok) for tok in seps)
            return system.element_from_window(window)
        if fam in ("B", "C", "D"):
            return system.element_from_window(tuple(int(t) for t in seps))
        raise WrongType("G2 elements must be given as s-sequences")
    if fam == "A":
        return system.element_from_window(tuple(int(ch) for ch in text))
    raise IndexOutOfRange(f"cannot parse element {text!r}")


def parse_word(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(tok.strip().lstrip("s")) for tok in text.split(","))
