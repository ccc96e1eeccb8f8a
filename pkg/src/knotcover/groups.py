"""Finitely presented groups, coset enumeration, and multiplication tables.

Words over a generator set are tuples of ints: a value ``k >= 0`` is
generator ``k``, a value ``k < 0`` is the inverse of generator ``~k``.
The letter syntax used by scene files and the CLI writes generators in
lower case and their inverses in upper case ("abA" = a * b * a^-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

Word = tuple[int, ...]

# Single-letter pool for element names; 'e' is reserved for the identity.
_NAME_POOL = "abcdfghijklmnopqrstuvwxyz"


class GroupError(Exception):
    pass


class EnumerationLimit(GroupError):
    """Coset enumeration exceeded its budget (the quotient may be infinite)."""


def word_inverse(w: Word) -> Word:
    return tuple(~k if k >= 0 else ~k for k in reversed(w))


def parse_word(text: str, generators: tuple[str, ...]) -> Word:
    """Parse letter syntax; upper case means inverse. Generators must be single letters."""
    index = {g: i for i, g in enumerate(generators)}
    out = []
    for ch in text.replace(" ", ""):
        low = ch.lower()
        if low not in index:
            raise GroupError(f"unknown generator {ch!r} in word {text!r}")
        i = index[low]
        out.append(i if ch == low else ~i)
    return tuple(out)


def word_str(w: Word, generators: tuple[str, ...]) -> str:
    parts = []
    for k in w:
        name = generators[k] if k >= 0 else generators[~k]
        if len(name) == 1:
            parts.append(name if k >= 0 else name.upper())
        else:
            parts.append(name if k >= 0 else name + "^-1")
    return " ".join(parts)


@dataclass(frozen=True)
class Presentation:
    """A finitely presented group <generators | relators>."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        if not self.generators:
            raise GroupError("presentation needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise GroupError("duplicate generator names")
        n = len(self.generators)
        for rel in self.relators:
            for k in rel:
                g = k if k >= 0 else ~k
                if not 0 <= g < n:
                    raise GroupError(f"relator letter {k} outside generator range")

    @classmethod
    def from_strings(cls, generators: list[str], relators: list[str]) -> "Presentation":
        gens = tuple(generators)
        return cls(gens, tuple(parse_word(r, gens) for r in relators))

    def relator_strings(self) -> list[str]:
        return ["".join(word_str(r, self.generators).split()) for r in self.relators]


def add_branching_relators(p: Presentation, order: int) -> Presentation:
    """Append g^order for every generator g; order is the branching order."""
    if order < 2:
        raise GroupError("branching order must be >= 2")
    extra = tuple((i,) * order for i in range(len(p.generators)))
    return Presentation(p.generators, p.relators + extra)


@dataclass(frozen=True)
class GroupTable:
    """A finite group as a multiplication table; rows are the left factor."""

    names: tuple[str, ...]
    table: np.ndarray  # (n, n) int, table[i][j] = index of names[i] * names[j]
    generator_elements: dict[str, int] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.names)

    @property
    def identity(self) -> int:
        n = self.order
        ident = np.arange(n)
        for i in range(n):
            if np.array_equal(self.table[i], ident):
                return i
        raise GroupError("table has no identity row")

    @property
    def inverse(self) -> tuple[int, ...]:
        e = self.identity
        inv = []
        for i in range(self.order):
            (js,) = np.nonzero(self.table[i] == e)
            if len(js) != 1:
                raise GroupError(f"element {self.names[i]} has no unique inverse")
            inv.append(int(js[0]))
        return tuple(inv)

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def element(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GroupError(f"unknown element {name!r}") from None

    def element_order(self, i: int) -> int:
        e = self.identity
        k, x = 1, i
        while x != e:
            x = self.mul(x, i)
            k += 1
        return k

    def grid(self) -> str:
        """The table as a letter grid (rows = left factor)."""
        return "\n".join(" ".join(self.names[j] for j in row) for row in self.table)


def validate(t: GroupTable) -> list[str]:
    """All group-table violations, empty iff ``t`` is a genuine group table."""
    out: list[str] = []
    n = len(t.names)
    tab = t.table
    if tab.shape != (n, n):
        return [f"table shape {tab.shape} does not match {n} names"]
    if len(set(t.names)) != n:
        out.append("duplicate element names")
    if tab.min(initial=0) < 0 or tab.max(initial=0) >= n:
        return out + ["table entries outside element range"]
    for i in range(n):
        if len(set(tab[i])) != n:
            out.append(f"row {t.names[i]} is not a permutation")
        if len(set(tab[:, i])) != n:
            out.append(f"column {t.names[i]} is not a permutation")
    ident_rows = [i for i in range(n) if np.array_equal(tab[i], np.arange(n))]
    if len(ident_rows) != 1:
        out.append("no unique identity row")
        return out
    e = ident_rows[0]
    if not np.array_equal(tab[:, e], np.arange(n)):
        out.append(f"identity column of {t.names[e]} is not the identity permutation")
    # associativity: (ij)k == i(jk) for all triples
    left = tab[tab, :]                  # left[i,j,k] = (ij)k
    right = tab[:, tab]                 # right[i,j,k] = i(jk)
    bad = np.argwhere(left != right)
    for i, j, k in bad[:8]:
        out.append(
            f"associativity fails at ({t.names[i]},{t.names[j]},{t.names[k]}):"
            f" ({t.names[i]}{t.names[j]}){t.names[k]} != {t.names[i]}({t.names[j]}{t.names[k]})"
        )
    if len(bad) > 8:
        out.append(f"... and {len(bad) - 8} more associativity failures")
    if not out:
        for i in range(n):
            if e not in tab[i]:
                out.append(f"element {t.names[i]} has no inverse")
    return out


# ---------------------------------------------------------------------------
# Todd-Coxeter coset enumeration (over the trivial subgroup).


class _CosetGraph:
    """Schreier graph with union-find vertex merging.

    Letters are directions 2k (generator k) and 2k+1 (its inverse).
    """

    def __init__(self, nletters: int, budget: int):
        self.nletters = nletters
        self.budget = budget
        self.labels: list[int] = []
        self.neighbors: list[list[int]] = []
        self.add_vertex()

    def add_vertex(self) -> int:
        c = len(self.labels)
        if c >= self.budget:
            raise EnumerationLimit(
                f"coset budget {self.budget} exceeded; the quotient may be infinite"
            )
        self.labels.append(c)
        self.neighbors.append([-1] * self.nletters)
        return c

    def find(self, c: int) -> int:
        root = c
        while self.labels[root] != root:
            root = self.labels[root]
        while self.labels[c] != root:
            self.labels[c], c = root, self.labels[c]
        return root

    def unify(self, c1: int, c2: int) -> None:
        queue = [(c1, c2)]
        while queue:
            a, b = queue.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            a, b = min(a, b), max(a, b)
            self.labels[b] = a
            for d in range(self.nletters):
                nb = self.neighbors[b][d]
                if nb == -1:
                    continue
                na = self.neighbors[a][d]
                if na == -1:
                    self.neighbors[a][d] = nb
                else:
                    queue.append((na, nb))

    def step(self, c: int, d: int) -> int:
        c = self.find(c)
        nxt = self.neighbors[c][d]
        if nxt == -1:
            nxt = self.add_vertex()
            self.neighbors[c][d] = nxt
            self.neighbors[nxt][d ^ 1] = c
        return self.find(nxt)

    def follow(self, c: int, letters: tuple[int, ...]) -> int:
        for d in letters:
            c = self.step(c, d)
        return c

    def build(self, relators: list[tuple[int, ...]]) -> None:
        visit = 0
        while visit < len(self.labels):
            if self.find(visit) == visit:
                for rel in relators:
                    self.unify(self.follow(visit, rel), visit)
            visit += 1

    def live(self) -> list[int]:
        return [c for c in range(len(self.labels)) if self.find(c) == c]


def _letters(w: Word) -> tuple[int, ...]:
    return tuple(2 * k if k >= 0 else 2 * (~k) + 1 for k in w)


def enumerate_cosets(p: Presentation, max_cosets: int = 10_000) -> GroupTable:
    """The finite quotient presented by ``p`` as a multiplication table.

    Enumerates cosets of the trivial subgroup, so the cosets are the group
    elements themselves.  Element 0 is the identity (named 'e'); each
    presentation generator is recorded in ``generator_elements``.  Raises
    EnumerationLimit when the coset budget is exhausted.
    """
    ngens = len(p.generators)
    graph = _CosetGraph(2 * ngens, budget=max(64, 24 * max_cosets))
    rels = [_letters(r) for r in p.relators]
    rels += [(2 * k, 2 * k + 1) for k in range(ngens)]
    rels += [(2 * k + 1, 2 * k) for k in range(ngens)]
    graph.build(rels)

    live = graph.live()
    if len(live) > max_cosets:
        raise EnumerationLimit(
            f"quotient has more than {max_cosets} elements ({len(live)} cosets)"
        )
    rank = {c: i for i, c in enumerate(live)}
    n = len(live)
    edge = np.empty((n, 2 * ngens), dtype=np.int64)
    for c in live:
        for d in range(2 * ngens):
            edge[rank[c], d] = rank[graph.find(graph.step(c, d))]

    # breadth-first words: coset -> word over letters, identity first
    words: dict[int, tuple[int, ...]] = {rank[graph.find(0)]: ()}
    order_found = [rank[graph.find(0)]]
    frontier = list(order_found)
    while frontier:
        nxt = []
        for c in frontier:
            for d in range(2 * ngens):
                j = int(edge[c, d])
                if j not in words:
                    words[j] = words[c] + (d,)
                    order_found.append(j)
                    nxt.append(j)
        frontier = nxt
    if len(words) != n:
        raise GroupError("coset graph is not connected")  # cannot happen

    # reorder cosets by discovery so element 0 is the identity
    newidx = {c: i for i, c in enumerate(order_found)}
    table = np.empty((n, n), dtype=np.int64)
    for i, ci in enumerate(order_found):
        for j, cj in enumerate(order_found):
            c = ci
            for d in words[cj]:
                c = int(edge[c, d])
            table[i, j] = newidx[c]

    gen_elements: dict[str, int] = {}
    for k, name in enumerate(p.generators):
        gen_elements[name] = newidx[int(edge[order_found[0], 2 * k])]

    names = _element_names(n, p.generators, gen_elements)
    t = GroupTable(names=names, table=table, generator_elements=gen_elements)
    problems = validate(t)
    if problems:
        raise GroupError("enumeration produced an invalid table: " + "; ".join(problems))
    return t


def _element_names(n: int, generators: tuple[str, ...], gen_elements: dict[str, int]) -> tuple[str, ...]:
    names: list[str | None] = [None] * n
    names[0] = "e"
    for g in generators:
        i = gen_elements[g]
        if names[i] is None:
            names[i] = g
    used = {nm for nm in names if nm is not None}
    pool = iter([c for c in _NAME_POOL if c not in used])
    counter = 0
    for i in range(n):
        if names[i] is None:
            nm = next(pool, None)
            if nm is None:
                while f"x{counter}" in used:
                    counter += 1
                nm = f"x{counter}"
            used.add(nm)
            names[i] = nm
    return tuple(names)  # type: ignore[arg-type]


def parse_table(text: str) -> GroupTable:
    """Parse a square letter grid (rows = left factor) into a GroupTable.

    The first row doubles as the element ordering, which matches the usual
    printed layout where the first row is the identity row.  The result is
    *not* validated; run ``validate`` and inspect the violations.
    """
    rows = [line.split() for line in text.strip().splitlines() if line.strip()]
    if not rows:
        raise GroupError("empty table text")
    if any(len(r) != len(rows) for r in rows):
        raise GroupError(
            f"table grid is not square: {len(rows)} rows, widths {sorted({len(r) for r in rows})}"
        )
    names = tuple(rows[0])
    if len(set(names)) != len(names):
        raise GroupError("first table row repeats a name")
    index = {nm: i for i, nm in enumerate(names)}
    n = len(names)
    table = np.empty((n, n), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, cell in enumerate(row):
            if cell not in index:
                raise GroupError(f"cell {cell!r} at row {i} col {j} is not a declared name")
            table[i, j] = index[cell]
    return GroupTable(names=names, table=table)


# ---------------------------------------------------------------------------
# Identification of small groups by brute-force isomorphism.


def cyclic_table(n: int) -> GroupTable:
    idx = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    names = _element_names(n, ("a",), {"a": 1 % n})
    return GroupTable(names=names, table=idx, generator_elements={"a": 1 % n})


def klein_table() -> GroupTable:
    p = Presentation.from_strings(["a", "b"], ["aa", "bb", "abab"])
    return enumerate_cosets(p)


def dihedral_table(m: int) -> GroupTable:
    """Dihedral group of order 2m as a reflection presentation."""
    p = Presentation.from_strings(["a", "b"], ["aa", "bb", "ab" * m])
    return enumerate_cosets(p)


def _generating_sequence(t: GroupTable) -> list[int]:
    e = t.identity
    gens: list[int] = []
    span = {e}
    for x in range(t.order):
        if x in span:
            continue
        gens.append(x)
        frontier = [x]
        span.add(x)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(span):
                    for c in (t.mul(a, b), t.mul(b, a)):
                        if c not in span:
                            span.add(c)
                            nxt.append(c)
            frontier = nxt
        if len(span) == t.order:
            break
    return gens


def isomorphic(a: GroupTable, b: GroupTable) -> bool:
    """Brute-force isomorphism test for small tables (order <= ~16)."""
    if a.order != b.order:
        return False
    orders_a = sorted(a.element_order(i) for i in range(a.order))
    orders_b = sorted(b.element_order(i) for i in range(b.order))
    if orders_a != orders_b:
        return False
    gens = _generating_sequence(a)
    by_order_b: dict[int, list[int]] = {}
    for i in range(b.order):
        by_order_b.setdefault(b.element_order(i), []).append(i)
    cand = [by_order_b.get(a.element_order(g), []) for g in gens]

    # every element of a as a word in gens, built once
    e = a.identity
    expr: dict[int, tuple] = {e: ()}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(gens):
                y = a.mul(x, g)
                if y not in expr:
                    expr[y] = expr[x] + (gi,)
                    nxt.append(y)
        frontier = nxt

    def image(x: int, imgs: tuple[int, ...]) -> int:
        y = b.identity
        for gi in expr[x]:
            y = b.mul(y, imgs[gi])
        return y

    for imgs in product(*cand):
        mapped = [image(x, imgs) for x in range(a.order)]
        if len(set(mapped)) != a.order:
            continue
        tab_a = a.table
        ok = True
        for i in range(a.order):
            mi = mapped[i]
            for j in range(a.order):
                if mapped[tab_a[i, j]] != b.mul(mi, mapped[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def identify(t: GroupTable) -> str:
    """Name of the isomorphism class for tables of order <= 16."""
    n = t.order
    if n > 16:
        raise GroupError("identification is only implemented for order <= 16")
    if n == 1:
        return "trivial"
    if isomorphic(t, cyclic_table(n)):
        return "Z2" if n == 2 else f"Z{n}"
    if n == 4 and isomorphic(t, klein_table()):
        return "Z2xZ2"
    if n % 2 == 0 and n >= 6 and isomorphic(t, dihedral_table(n // 2)):
        return f"D{n // 2}"
    return "other"


def tables_match(a: GroupTable, b: GroupTable) -> dict:
    """Compare two tables exactly, modulo relabeling, and modulo transposition.

    Returns a report dict; used to check printed table fixtures against
    enumeration without silently accepting either.
    """
    report = {
        "same_order": a.order == b.order,
        "exact": False,
        "relabeled": False,
        "transposed_relabeled": False,
        "violations_a": validate(a),
        "violations_b": validate(b),
    }
    if not report["same_order"]:
        return report
    report["exact"] = a.names == b.names and np.array_equal(a.table, b.table)
    if not report["violations_a"] and not report["violations_b"]:
        report["relabeled"] = isomorphic(a, b)
        bt = GroupTable(names=b.names, table=b.table.T.copy())
        if not validate(bt):
            report["transposed_relabeled"] = isomorphic(a, bt)
    return report
