"""
Finite Coxeter groups from Coxeter matrices.

Elements are enumerated by Todd-Coxeter coset enumeration over the trivial
subgroup of the presentation <S | s^2, (st)^m_st>, which is exact and works
for any Coxeter matrix.  Infinite (or too large) groups overflow the coset
table and raise :class:`CapExceeded`.

Elements are dense ints ordered by (length, ShortLex-minimal reduced word);
the identity is 0.

>>> W = CoxeterGroup.named("A2")
>>> W.order, W.word_str(W.longest_element())
(6, 's1.s2.s1')
>>> W.bruhat_leq(W.from_word([0]), W.from_word([1, 0]))
True
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .laurent import Gamma, gamma_add, gamma_zero

__all__ = [
    "INF", "CapExceeded", "ConjugacyViolation", "NegativeWeight",
    "CoxeterGroup", "WeightFunction", "ParabolicData",
    "coxeter_matrix", "DEFAULT_CAP",
]

INF = 0  # m_st = infinity (no relation); GAP/Sage convention
DEFAULT_CAP = 10_000


class CapExceeded(RuntimeError):
    """The group has more elements than the enumeration cap allows."""


class ConjugacyViolation(ValueError):
    def __init__(self, s: int, t: int):
        super().__init__(f"L(s{s + 1}) != L(s{t + 1}) but s{s + 1}, s{t + 1} are conjugate")
        self.s, self.t = s, t


class NegativeWeight(ValueError):
    def __init__(self, s: int):
        super().__init__(f"L(s{s + 1}) < 0")
        self.s = s


# -- Coxeter matrices ---------------------------------------------------------

def _dynkin(kind: str, n: int) -> list[list[int]]:
    m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]

    def edge(i, j, v):
        m[i][j] = m[j][i] = v

    if kind == "A":
        for i in range(n - 1):
            edge(i, i + 1, 3)
    elif kind in ("B", "C"):
        # s1 is the short/long special node: m(s1, s2) = 4
        if n >= 2:
            edge(0, 1, 4)
        for i in range(1, n - 1):
            edge(i, i + 1, 3)
    elif kind == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        for i in range(n - 2):
            edge(i, i + 1, 3)
        edge(n - 3, n - 1, 3)
    elif kind == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n needs n in 6..8")
        # Bourbaki: 1-3-4-5-..., 2 attached to 4
        edge(0, 2, 3)
        edge(1, 3, 3)
        for i in range(2, n - 1):
            edge(i, i + 1, 3)
    elif kind == "F":
        if n != 4:
            raise ValueError("F_4 only")
        edge(0, 1, 3)
        edge(1, 2, 4)
        edge(2, 3, 3)
    elif kind == "H":
        if n not in (3, 4):
            raise ValueError("H_3 or H_4 only")
        edge(0, 1, 5)
        for i in range(1, n - 1):
            edge(i, i + 1, 3)
    elif kind == "G":
        if n != 2:
            raise ValueError("G_2 only")
        edge(0, 1, 6)
    else:
        raise ValueError(f"unknown Cartan type {kind}{n}")
    return m


def _block_sum(blocks: list[list[list[int]]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                m[off + i][off + j] = v
        off += len(b)
    return m


def coxeter_matrix(name: str) -> list[list[int]]:
    """
    Coxeter matrix for a name like ``"A3"``, ``"B2"``, ``"I2(5)"`` or a
    product ``"A1xA1"``.
    """
    blocks = []
    for part in name.replace(" ", "").split("x"):
        mt = re.fullmatch(r"I2\((\d+)\)", part)
        if mt:
            v = int(mt.group(1))
            if v < 2:
                raise ValueError(f"bad dihedral order in {part}")
            blocks.append([[1, v], [v, 1]])
            continue
        mt = re.fullmatch(r"([A-HI])(\d+)", part)
        if not mt:
            raise ValueError(f"cannot parse group name {name!r}")
        blocks.append(_dynkin(mt.group(1), int(mt.group(2))))
    return _block_sum(blocks)


def _validate_matrix(m: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(m)
    m = [list(map(int, row)) for row in m]
    for i in range(n):
        if len(m[i]) != n:
            raise ValueError("Coxeter matrix must be square")
        if m[i][i] != 1:
            raise ValueError("Coxeter matrix must have 1 on the diagonal")
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise ValueError("Coxeter matrix must be symmetric")
            if i != j and m[i][j] != INF and m[i][j] < 2:
                raise ValueError("off-diagonal Coxeter entries must be >= 2 or infinity (0)")
    return m


# -- coset enumeration ----------------------------------------------------------

def _enumerate(m: list[list[int]], cap: int) -> list[list[int]]:
    """
    HLT Todd-Coxeter over the trivial subgroup, generators are involutions.

    Returns the right-regular table ``table[c][s] = c*s`` on live cosets,
    renumbered so coset 0 is the identity.
    """
    n = len(m)
    rels = []
    for i in range(n):
        for j in range(i + 1, n):
            if m[i][j] != INF:
                rels.append([i, j] * m[i][j])
    limit = max(4 * cap, 1024)
    table: list[list[int]] = [[-1] * n]
    parent = [0]

    def rep(c: int) -> int:
        r = c
        while parent[r] != r:
            r = parent[r]
        while parent[c] != r:
            parent[c], c = r, parent[c]
        return r

    def define(c: int, s: int) -> None:
        if len(table) >= limit:
            raise CapExceeded(f"coset table exceeded {limit} entries (cap {cap})")
        d = len(table)
        table.append([-1] * n)
        parent.append(d)
        table[c][s] = d
        table[d][s] = c

    def coincidence(a: int, b: int) -> None:
        queue: list[int] = []

        def merge(k, l):
            k, l = rep(k), rep(l)
            if k == l:
                return
            if l < k:
                k, l = l, k
            parent[l] = k
            queue.append(l)

        merge(a, b)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(n):
                f = table[e][x]
                if f == -1:
                    continue
                table[f][x] = -1
                e1, f1 = rep(e), rep(f)
                if table[e1][x] != -1:
                    merge(f1, table[e1][x])
                elif table[f1][x] != -1:
                    merge(e1, table[f1][x])
                else:
                    table[e1][x] = f1
                    table[f1][x] = e1

    def scan_and_fill(c: int, w: list[int]) -> None:
        f, i = c, 0
        b, j = c, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] != -1:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][w[j]] != -1:
                b = table[b][w[j]]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i]] = f
                return
            define(f, w[i])

    c = 0
    while c < len(table):
        for w in rels:
            if parent[c] != c:
                break
            scan_and_fill(c, w)
        if parent[c] == c:
            for x in range(n):
                if parent[c] != c:
                    break
                if table[c][x] == -1:
                    define(c, x)
        c += 1

    live = [c for c in range(len(table)) if parent[c] == c]
    if len(live) > cap:
        raise CapExceeded(f"group has {len(live)} elements, cap is {cap}")
    index = {c: i for i, c in enumerate(live)}
    return [[index[rep(table[c][x])] for x in range(n)] for c in live]


# -- the group ------------------------------------------------------------------

@dataclass
class ParabolicData:
    """Minimal left coset representatives D_J and the (s, w) trichotomy."""
    J: frozenset
    elements: list[int]
    member: set[int]
    # kind[(s, w)] in {"-", "+", "0"}
    kind: dict[tuple[int, int], str]
    # for kind "0": the t in J with sw = wt
    twist: dict[tuple[int, int], int]

    def minus(self, s: int) -> list[int]:
        return [w for w in self.elements if self.kind[s, w] == "-"]

    def plus(self, s: int) -> list[int]:
        return [w for w in self.elements if self.kind[s, w] == "+"]

    def zero(self, s: int) -> list[int]:
        return [w for w in self.elements if self.kind[s, w] == "0"]


class CoxeterGroup:
    """
    A finite Coxeter group with precomputed multiplication-by-generator tables.

    Attributes of note: ``order``, ``rank``, ``length[w]``, ``word[w]`` (a tuple
    of generator indices), ``right[w][s] = ws``, ``left[w][s] = sw``,
    ``inverse[w]``.
    """

    def __init__(self, m: Sequence[Sequence[int]], cap: int = DEFAULT_CAP,
                 name: str | None = None):
        self.m = _validate_matrix(m)
        self.rank = len(self.m)
        self.cap = cap
        self.name = name or "matrix"
        self.gens = [f"s{i + 1}" for i in range(self.rank)]
        raw = _enumerate(self.m, cap) if self.rank else [[]]
        self._build(raw)

    @classmethod
    def named(cls, name: str, cap: int = DEFAULT_CAP) -> "CoxeterGroup":
        return cls(coxeter_matrix(name), cap=cap, name=name)

    @classmethod
    def from_config(cls, cfg: dict) -> "CoxeterGroup":
        cap = int(cfg.get("cap", DEFAULT_CAP))
        if cfg.get("type") == "named":
            return cls.named(cfg["name"], cap=cap)
        if cfg.get("type") == "matrix":
            m = [[INF if v in (None, "inf", "oo", float("inf")) else v for v in row]
                 for row in cfg["m"]]
            return cls(m, cap=cap)
        raise ValueError(f"bad group config {cfg!r}")

    def _build(self, raw: list[list[int]]) -> None:
        n = self.rank
        N = len(raw)
        # lengths by BFS from the identity
        dist = [-1] * N
        dist[0] = 0
        frontier = [0]
        order = [0]
        while frontier:
            nxt = []
            for c in frontier:
                for s in range(n):
                    d = raw[c][s]
                    if dist[d] == -1:
                        dist[d] = dist[c] + 1
                        nxt.append(d)
                        order.append(d)
            frontier = nxt
        # ShortLex-minimal reduced words: min over right descents of word(ws)+s
        words: list[tuple[int, ...] | None] = [None] * N
        words[0] = ()
        for c in sorted(order, key=lambda c: dist[c]):
            if c == 0:
                continue
            words[c] = min(words[raw[c][s]] + (s,)
                           for s in range(n) if dist[raw[c][s]] < dist[c])
        perm = sorted(range(N), key=lambda c: (dist[c], words[c]))
        new = {c: i for i, c in enumerate(perm)}
        self.order = N
        self.length = [dist[c] for c in perm]
        self.word = [words[c] for c in perm]
        self.right = [[new[raw[c][s]] for s in range(n)] for c in perm]
        self._word_index = {w: i for i, w in enumerate(self.word)}
        self.inverse = [self.from_word(reversed(w)) for w in self.word]
        self.left = [[self.inverse[self.right[self.inverse[w]][s]] for s in range(n)]
                     for w in range(N)]
        self._bruhat_cache: dict[tuple[int, int], bool] = {}

    # -- basic queries ------------------------------------------------------

    @property
    def identity(self) -> int:
        return 0

    @property
    def elements(self) -> range:
        return range(self.order)

    def from_word(self, word: Iterable[int]) -> int:
        w = 0
        for s in word:
            w = self.right[w][s]
        return w

    def parse_word(self, text: str) -> int:
        """'s1.s2.s1' (or '1' / 'e' / '' for the identity) -> element."""
        text = text.strip()
        if text in ("", "1", "e", "id"):
            return 0
        out = []
        for tok in re.split(r"[.\s*]+", text):
            if not tok:
                continue
            mt = re.fullmatch(r"s?(\d+)", tok)
            if not mt or not 1 <= int(mt.group(1)) <= self.rank:
                raise ValueError(f"bad generator {tok!r} in word {text!r}")
            out.append(int(mt.group(1)) - 1)
        return self.from_word(out)

    def parse_gens(self, names: Iterable[str]) -> frozenset:
        out = set()
        for tok in names:
            tok = tok.strip()
            if not tok:
                continue
            mt = re.fullmatch(r"s?(\d+)", tok)
            if not mt or not 1 <= int(mt.group(1)) <= self.rank:
                raise ValueError(f"bad generator name {tok!r}")
            out.add(int(mt.group(1)) - 1)
        return frozenset(out)

    def word_str(self, w: int) -> str:
        return ".".join(self.gens[s] for s in self.word[w]) or "1"

    def mul(self, x: int, y: int) -> int:
        for s in self.word[y]:
            x = self.right[x][s]
        return x

    def sign(self, w: int) -> int:
        return -1 if self.length[w] & 1 else 1

    def left_descents(self, w: int) -> frozenset:
        return frozenset(s for s in range(self.rank)
                         if self.length[self.left[w][s]] < self.length[w])

    def right_descents(self, w: int) -> frozenset:
        return frozenset(s for s in range(self.rank)
                         if self.length[self.right[w][s]] < self.length[w])

    # -- orders ---------------------------------------------------------------

    def bruhat_leq(self, x: int, y: int) -> bool:
        """
        Bruhat order by the descent recursion: for s with sy < y,
        x <= y iff sx <= sy when sx < x, and iff x <= sy otherwise.
        """
        if x == y or x == 0:
            return True
        if self.length[x] >= self.length[y]:
            return False
        key = (x, y)
        hit = self._bruhat_cache.get(key)
        if hit is not None:
            return hit
        left = self.left
        ly = self.length[y]
        s = next(s for s in range(self.rank) if self.length[left[y][s]] < ly)
        sx = left[x][s]
        if self.length[sx] < self.length[x]:
            res = self.bruhat_leq(sx, left[y][s])
        else:
            res = self.bruhat_leq(x, left[y][s])
        self._bruhat_cache[key] = res
        return res

    def bruhat_lt(self, x: int, y: int) -> bool:
        return x != y and self.bruhat_leq(x, y)

    def weak_leq(self, x: int, y: int) -> bool:
        """Left weak order: x is a suffix of y."""
        z = self.mul(y, self.inverse[x])
        return self.length[z] + self.length[x] == self.length[y]

    def weak_ideal(self, w: int) -> list[int]:
        """All suffixes of w, i.e. {u : u <=_L w}."""
        return [u for u in self.elements if self.weak_leq(u, w)]

    # -- parabolic machinery -----------------------------------------------------

    def parabolic_subgroup(self, K: Iterable[int]) -> list[int]:
        K = frozenset(K)
        return [w for w in self.elements if set(self.word[w]) <= K]

    def longest_in(self, K: Iterable[int]) -> int:
        sub = self.parabolic_subgroup(K)
        return max(sub, key=lambda w: self.length[w])

    def parabolic(self, J: Iterable[int]) -> ParabolicData:
        J = frozenset(J)
        rd = [self.right_descents(w) for w in self.elements]
        elems = [w for w in self.elements if not (rd[w] & J)]
        member = set(elems)
        kind = {}
        twist = {}
        for s in range(self.rank):
            for w in elems:
                sw = self.left[w][s]
                if self.length[sw] < self.length[w]:
                    kind[s, w] = "-"
                elif sw in member:
                    kind[s, w] = "+"
                else:
                    kind[s, w] = "0"
                    t = self.mul(self.inverse[w], sw)
                    twist[s, w] = self.word[t][0]
        return ParabolicData(J, elems, member, kind, twist)

    def pos_set(self, X: Iterable[int]) -> frozenset:
        X = list(X)
        return frozenset(s for s in range(self.rank)
                         if all(self.length[self.right[x][s]] > self.length[x] for x in X))

    def longest_element(self) -> int:
        top = max(self.length)
        cands = [w for w in self.elements if self.length[w] == top]
        if len(cands) != 1:
            raise AssertionError("longest element is not unique")
        return cands[0]

    def pi_map(self, w: int) -> int:
        w0 = self.longest_element()
        return self.mul(self.mul(w0, w), w0)

    def pi_gen(self, s: int) -> int:
        t = self.pi_map(self.right[0][s])
        (s0,) = self.word[t]
        return s0

    # -- conjugacy of generators ---------------------------------------------------

    def generator_classes(self) -> list[frozenset]:
        """Conjugacy classes of S: components of the odd-edge graph."""
        parent = list(range(self.rank))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                v = self.m[i][j]
                if v != INF and v % 2 == 1:
                    parent[find(i)] = find(j)
        classes: dict[int, set] = {}
        for i in range(self.rank):
            classes.setdefault(find(i), set()).add(i)
        return sorted((frozenset(c) for c in classes.values()), key=min)

    def __repr__(self):
        return f"CoxeterGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class WeightFunction:
    """Per-generator weights L(s) in Gamma = Z^k."""
    values: tuple  # tuple[Gamma, ...]

    @property
    def rank(self) -> int:
        return len(self.values[0]) if self.values else 1

    @classmethod
    def equal(cls, W: CoxeterGroup, k: int = 1) -> "WeightFunction":
        one = (1,) + (0,) * (k - 1)
        return cls(tuple(one for _ in range(W.rank)))

    @classmethod
    def from_ints(cls, vals: Iterable[int]) -> "WeightFunction":
        return cls(tuple((int(v),) for v in vals))

    @classmethod
    def from_config(cls, W: CoxeterGroup, cfg: dict) -> "WeightFunction":
        k = int(cfg.get("gamma_rank", 1))
        L = cfg.get("L", "equal")
        if L == "equal":
            return cls.equal(W, k)
        vals = []
        for s in range(W.rank):
            v = L[W.gens[s]] if isinstance(L, dict) else L[s]
            v = (v,) if isinstance(v, int) else tuple(v)
            if len(v) != k:
                raise ValueError(f"weight of {W.gens[s]} has rank {len(v)}, expected {k}")
            vals.append(v)
        return cls(tuple(vals))

    def of_gen(self, s: int) -> Gamma:
        return self.values[s]

    def of(self, W: CoxeterGroup, w: int) -> Gamma:
        g = gamma_zero(self.rank)
        for s in W.word[w]:
            g = gamma_add(g, self.values[s])
        return g

    def validate(self, W: CoxeterGroup) -> None:
        """Raise NegativeWeight / ConjugacyViolation if L is not a weight function."""
        if len(self.values) != W.rank:
            raise ValueError(f"need {W.rank} weights, got {len(self.values)}")
        z = gamma_zero(self.rank)
        for s, v in enumerate(self.values):
            if v < z:
                raise NegativeWeight(s)
        for cls_ in W.generator_classes():
            members = sorted(cls_)
            for t in members[1:]:
                if self.values[t] != self.values[members[0]]:
                    raise ConjugacyViolation(members[0], t)

    def is_positive(self) -> bool:
        z = gamma_zero(self.rank)
        return all(v > z for v in self.values)

    def to_config(self, W: CoxeterGroup) -> dict:
        return {"gamma_rank": self.rank,
                "L": {W.gens[s]: list(v) for s, v in enumerate(self.values)}}


def validate_weights(W: CoxeterGroup, L: WeightFunction) -> None:
    L.validate(W)
