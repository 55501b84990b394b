"""SMARTS subset: pattern parsing and subgraph matching.

Supported atom primitives: element symbols (case carries aromaticity),
#n, a, A, *, Dn (heavy-atom degree), Hn (total hydrogens), hn (implicit
hydrogens), Xn (connectivity: heavy degree plus hydrogens), vn
(valence), +n/-n (charge), R/R0/Rn (SSSR ring membership count), r/rn
(ring size), and recursive $(...) groups.  Bond primitives: - = # : ~ @
with / and \\ read as plain single bonds.  Boolean operators !, & (or
juxtaposition), ',' and ';' apply to both atom and bond expressions.

Unsupported Daylight constructs (isotope matching, chirality) raise a
parse error naming the primitive.  Hydrogen-count 'H' is always the
count primitive here; match explicit hydrogen atoms with [#1].

Matching is backtracking subgraph isomorphism with rarest-candidate
ordering; results are deduplicated by matched atom set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .elements import ATOMIC_NUMBER, AROMATIC_SYMBOLS, ORGANIC_SUBSET
from .mol import AROMATIC, SINGLE, Molecule


class SmartsError(ValueError):
    """Raised for malformed or unsupported SMARTS input."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (position {position})"
        super().__init__(message)
        self.position = position


# Expression trees are nested tuples:
#   ("not", expr) / ("and", (exprs...)) / ("or", (exprs...))
#   atom leaves: ("elem", z, aromatic|None), ("any",), ("arom",),
#     ("aliph",), ("deg", n), ("totalh", n), ("implh", n), ("conn", n),
#     ("val", n), ("charge", n), ("ringcount", n|None), ("ringsize", n|None),
#     ("rec", Pattern)
#   bond leaves: ("border", order), ("bany",), ("bring",)


@dataclass
class Pattern:
    """A parsed SMARTS pattern: node predicates plus bond predicates."""

    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)   # (i, j, bond expr or None)
    source: str = ""
    components: list = field(default_factory=list)

    def __post_init__(self):
        self._adj = None

    @property
    def adjacency(self):
        if self._adj is None:
            self._adj = [[] for _ in self.nodes]
            for i, j, expr in self.edges:
                self._adj[i].append((j, expr))
                self._adj[j].append((i, expr))
        return self._adj


class _SmartsTokenizer:
    def __init__(self, text, offset=0):
        self.text = text
        self.pos = 0
        self.offset = offset

    def error(self, message):
        raise SmartsError(message, self.offset + self.pos)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        ch = self.text[self.pos]
        self.pos += 1
        return ch

    def number(self):
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        return int(self.text[start:self.pos]) if self.pos > start else None


_TWO_LETTER_UPPER = sorted((s for s in ATOMIC_NUMBER if len(s) == 2),
                           key=len, reverse=True)
_TWO_LETTER_AROMATIC = {"se", "te", "as", "si"}


def _parse_atom_primitive(tk):
    """One atom-level primitive at the tokenizer position."""
    ch = tk.peek()
    if ch == "":
        tk.error("unexpected end of atom expression")
    if ch.isdigit():
        tk.error("unsupported primitive: isotope matching")
    if ch == "@":
        tk.error("unsupported primitive: chirality")
    if ch == "*":
        tk.take()
        return ("any",)
    if ch == "#":
        tk.take()
        n = tk.number()
        if n is None:
            tk.error("'#' needs an atomic number")
        return ("elem", n, None)
    if ch == "$":
        tk.take()
        if tk.peek() != "(":
            tk.error("'$' must be followed by '(...)'")
        tk.take()
        depth = 1
        start = tk.pos
        while depth:
            if tk.pos >= len(tk.text):
                tk.error("unbalanced recursive group")
            c = tk.take()
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
        inner = tk.text[start:tk.pos - 1]
        return ("rec", parse_smarts(inner))
    if ch == "+" or ch == "-":
        sign = 1 if ch == "+" else -1
        tk.take()
        n = tk.number()
        if n is None:
            n = 1
            while tk.peek() == ch:
                tk.take()
                n += 1
        return ("charge", sign * n)
    # Two-letter element symbols take precedence over count primitives
    # (maximal munch: [Hg] is mercury, not an H count).
    two = tk.text[tk.pos:tk.pos + 2]
    if two in ATOMIC_NUMBER and len(two) == 2:
        tk.pos += 2
        return ("elem", ATOMIC_NUMBER[two], False)
    if two in _TWO_LETTER_AROMATIC:
        tk.pos += 2
        return ("elem", ATOMIC_NUMBER[two.capitalize()], True)

    if ch == "R":
        tk.take()
        return ("ringcount", tk.number())
    if ch == "r":
        tk.take()
        return ("ringsize", tk.number())
    if ch == "D":
        tk.take()
        n = tk.number()
        return ("deg", 1 if n is None else n)
    if ch == "H":
        tk.take()
        n = tk.number()
        return ("totalh", 1 if n is None else n)
    if ch == "h":
        tk.take()
        n = tk.number()
        return ("implh", 1 if n is None else n)
    if ch == "X":
        tk.take()
        n = tk.number()
        return ("conn", 1 if n is None else n)
    if ch == "v":
        tk.take()
        n = tk.number()
        return ("val", 1 if n is None else n)
    if ch == "a":
        tk.take()
        return ("arom",)
    if ch == "A":
        tk.take()
        return ("aliph",)
    if ch.isupper() and ch in ATOMIC_NUMBER:
        tk.take()
        return ("elem", ATOMIC_NUMBER[ch], False)
    if ch.islower() and ch.upper() in ATOMIC_NUMBER and ch in "bcnops":
        tk.take()
        return ("elem", ATOMIC_NUMBER[ch.upper()], True)
    tk.error(f"unsupported primitive: {ch!r}")


def _parse_bool(tk, parse_leaf, stop_chars):
    """Generic !/&/,/; expression parser over ``parse_leaf``."""

    def parse_unary():
        if tk.peek() == "!":
            tk.take()
            return ("not", parse_unary())
        return parse_leaf(tk)

    def parse_and():
        terms = [parse_unary()]
        while True:
            ch = tk.peek()
            if ch == "&":
                tk.take()
                terms.append(parse_unary())
            elif ch and ch not in stop_chars and ch not in ",;":
                terms.append(parse_unary())
            else:
                break
        return terms[0] if len(terms) == 1 else ("and", tuple(terms))

    def parse_or():
        terms = [parse_and()]
        while tk.peek() == ",":
            tk.take()
            terms.append(parse_and())
        return terms[0] if len(terms) == 1 else ("or", tuple(terms))

    terms = [parse_or()]
    while tk.peek() == ";":
        tk.take()
        terms.append(parse_or())
    return terms[0] if len(terms) == 1 else ("and", tuple(terms))


_BOND_LEAVES = {"-": ("border", 1), "=": ("border", 2), "#": ("border", 3),
                ":": ("border", 4), "~": ("bany",), "@": ("bring",),
                "/": ("border", 1), "\\": ("border", 1)}


def _parse_bond_leaf(tk):
    ch = tk.peek()
    leaf = _BOND_LEAVES.get(ch)
    if leaf is None:
        tk.error(f"expected a bond primitive, found {ch!r}")
    tk.take()
    return leaf


_BOND_START = set("-=#:~@/\\!")


class _PatternParser:
    def __init__(self, text):
        self.text = text
        self.tk = _SmartsTokenizer(text)
        self.nodes = []
        self.edges = []
        self.edge_keys = set()

    def error(self, message):
        self.tk.error(message)

    def add_node(self, expr):
        self.nodes.append(expr)
        return len(self.nodes) - 1

    def add_edge(self, i, j, expr):
        if i == j:
            self.error("self-bond in pattern")
        key = frozenset((i, j))
        if key in self.edge_keys:
            self.error("duplicate bond in pattern")
        self.edge_keys.add(key)
        self.edges.append((i, j, expr))

    def parse_atom(self):
        tk = self.tk
        if tk.peek() == "[":
            tk.take()
            expr = _parse_bool(tk, _parse_atom_primitive, stop_chars="]")
            if tk.peek() != "]":
                self.error("expected ']'")
            tk.take()
            return self.add_node(expr)
        two = tk.text[tk.pos:tk.pos + 2]
        if two in ("Cl", "Br"):
            tk.pos += 2
            return self.add_node(("elem", ATOMIC_NUMBER[two], False))
        ch = tk.peek()
        if ch == "*":
            tk.take()
            return self.add_node(("any",))
        if ch == "a":
            tk.take()
            return self.add_node(("arom",))
        if ch == "A":
            tk.take()
            return self.add_node(("aliph",))
        if ch in ORGANIC_SUBSET:
            tk.take()
            return self.add_node(("elem", ATOMIC_NUMBER[ch], False))
        if ch in "bcnops":
            tk.take()
            return self.add_node(("elem", ATOMIC_NUMBER[ch.upper()], True))
        self.error(f"unexpected character {ch!r}")

    def parse(self):
        tk = self.tk
        prev = None
        pending = None
        branch_stack = []
        ring_open = {}
        component_breaks = []

        while tk.pos < len(self.text):
            ch = tk.peek()
            if ch == "(":
                if prev is None:
                    self.error("branch before any atom")
                branch_stack.append(prev)
                tk.take()
            elif ch == ")":
                if not branch_stack:
                    self.error("unmatched ')'")
                prev = branch_stack.pop()
                tk.take()
            elif ch in _BOND_START:
                if pending is not None:
                    self.error("two bond expressions in a row")
                pending = _parse_bool(tk, _parse_bond_leaf,
                                      stop_chars="[]()*aAbcnopsBCNOPSFIH%0123456789$.")
            elif ch == ".":
                if branch_stack:
                    self.error("dot inside a branch")
                tk.take()
                component_breaks.append(len(self.nodes))
                prev = None
            elif ch.isdigit() or ch == "%":
                if prev is None:
                    self.error("ring bond digit before any atom")
                if ch == "%":
                    tk.take()
                    digits = tk.text[tk.pos:tk.pos + 2]
                    if len(digits) != 2 or not digits.isdigit():
                        self.error("'%' ring bond needs two digits")
                    tk.pos += 2
                    label = int(digits)
                else:
                    label = int(tk.take())
                if label in ring_open:
                    start, open_expr = ring_open.pop(label)
                    expr = pending if pending is not None else open_expr
                    self.add_edge(start, prev, expr)
                else:
                    ring_open[label] = (prev, pending)
                pending = None
            else:
                node = self.parse_atom()
                if prev is not None:
                    self.add_edge(prev, node, pending)
                elif pending is not None:
                    self.error("bond expression with no preceding atom")
                prev = node
                pending = None

        if branch_stack:
            self.error("unclosed branch")
        if ring_open:
            self.error(f"unclosed ring bond {sorted(ring_open)[0]}")
        if pending is not None:
            self.error("dangling bond expression")
        if not self.nodes:
            self.error("empty pattern")

        comps = self._components()
        return Pattern(nodes=self.nodes, edges=self.edges, source=self.text,
                       components=comps)

    def _components(self):
        adj = [[] for _ in self.nodes]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        seen = [False] * len(self.nodes)
        comps = []
        for start in range(len(self.nodes)):
            if seen[start]:
                continue
            comp = []
            stack = [start]
            seen[start] = True
            while stack:
                n = stack.pop()
                comp.append(n)
                for m in adj[n]:
                    if not seen[m]:
                        seen[m] = True
                        stack.append(m)
            comps.append(sorted(comp))
        return comps


def parse_smarts(text: str) -> Pattern:
    """Parse a SMARTS string into a Pattern."""
    if not text or not text.strip():
        raise SmartsError("empty SMARTS")
    return _PatternParser(text.strip()).parse()


class _MatchContext:
    """Per-call state: the molecule plus recursive-group memo tables."""

    __slots__ = ("mol", "rec_memo", "cand_memo")

    def __init__(self, mol):
        self.mol = mol
        self.rec_memo = {}
        self.cand_memo = {}


def eval_atom_expr(expr, ctx, atom_idx):
    op = expr[0]
    if op == "and":
        return all(eval_atom_expr(e, ctx, atom_idx) for e in expr[1])
    if op == "or":
        return any(eval_atom_expr(e, ctx, atom_idx) for e in expr[1])
    if op == "not":
        return not eval_atom_expr(expr[1], ctx, atom_idx)
    atom = ctx.mol.atoms[atom_idx]
    if op == "elem":
        if atom.atomic_number != expr[1]:
            return False
        return expr[2] is None or atom.aromatic == expr[2]
    if op == "any":
        return True
    if op == "arom":
        return atom.aromatic
    if op == "aliph":
        return not atom.aromatic
    if op == "deg":
        return atom.heavy_degree == expr[1]
    if op == "totalh":
        return atom.total_h == expr[1]
    if op == "implh":
        return atom.implicit_h == expr[1]
    if op == "conn":
        return atom.heavy_degree + atom.total_h == expr[1]
    if op == "val":
        return atom.valence == expr[1]
    if op == "charge":
        return atom.charge == expr[1]
    if op == "ringcount":
        if expr[1] is None:
            return atom.ring_count > 0
        return atom.ring_count == expr[1]
    if op == "ringsize":
        if expr[1] is None:
            return atom.in_ring
        return expr[1] in atom.ring_sizes
    if op == "rec":
        key = (id(expr[1]), atom_idx)
        hit = ctx.rec_memo.get(key)
        if hit is None:
            hit = _matches_anchored(expr[1], ctx, atom_idx)
            ctx.rec_memo[key] = hit
        return hit
    raise SmartsError(f"unknown primitive {op!r}")


def eval_bond_expr(expr, ctx, bond):
    if expr is None:
        return bond.order == SINGLE or bond.order == AROMATIC
    op = expr[0]
    if op == "and":
        return all(eval_bond_expr(e, ctx, bond) for e in expr[1])
    if op == "or":
        return any(eval_bond_expr(e, ctx, bond) for e in expr[1])
    if op == "not":
        return not eval_bond_expr(expr[1], ctx, bond)
    if op == "border":
        return bond.order == expr[1]
    if op == "bany":
        return True
    if op == "bring":
        return bond.in_ring
    raise SmartsError(f"unknown bond primitive {op!r}")


def _order_component(pattern, comp, candidates):
    """Node visit order: rarest first, then connected expansion."""
    remaining = set(comp)
    order = []
    start = min(remaining, key=lambda n: (len(candidates[n][0]), n))
    order.append(start)
    remaining.discard(start)
    while remaining:
        adjacent = [n for n in remaining
                    if any(m in order for m, _ in pattern.adjacency[n])]
        pool = adjacent or sorted(remaining)
        nxt = min(pool, key=lambda n: (len(candidates[n][0]), n))
        order.append(nxt)
        remaining.discard(nxt)
    return order


def _search(pattern, ctx, order_all, candidates, mapping, used, pos, found,
            first_only):
    if pos == len(order_all):
        found.append(dict(mapping))
        return first_only
    node = order_all[pos]
    mol = ctx.mol

    cand_list, cand_set = candidates[node]
    anchored = [(m, e) for m, e in pattern.adjacency[node] if m in mapping]
    if anchored:
        base_atom = mapping[anchored[0][0]]
        pool = [n for n, _ in mol.neighbors(base_atom)]
    else:
        pool = cand_list

    for atom_idx in pool:
        if atom_idx in used:
            continue
        if atom_idx not in cand_set:
            continue
        ok = True
        for m, expr in pattern.adjacency[node]:
            if m not in mapping:
                continue
            bond = mol.bond_between(atom_idx, mapping[m])
            if bond is None or not eval_bond_expr(expr, ctx, bond):
                ok = False
                break
        if not ok:
            continue
        mapping[node] = atom_idx
        used.add(atom_idx)
        stop = _search(pattern, ctx, order_all, candidates, mapping, used,
                       pos + 1, found, first_only)
        del mapping[node]
        used.discard(atom_idx)
        if stop:
            return True
    return False


def _prepare(pattern, ctx):
    cached = ctx.cand_memo.get(id(pattern))
    if cached is not None or id(pattern) in ctx.cand_memo:
        return cached
    n_atoms = len(ctx.mol.atoms)
    candidates = []
    for expr in pattern.nodes:
        cands = [i for i in range(n_atoms) if eval_atom_expr(expr, ctx, i)]
        if not cands:
            candidates = None
            break
        candidates.append((cands, frozenset(cands)))
    ctx.cand_memo[id(pattern)] = candidates
    return candidates


def _run(pattern, mol_or_ctx, first_only):
    ctx = (mol_or_ctx if isinstance(mol_or_ctx, _MatchContext)
           else _MatchContext(mol_or_ctx))
    candidates = _prepare(pattern, ctx)
    if candidates is None:
        return []
    order_all = []
    for comp in pattern.components:
        order_all.extend(_order_component(pattern, comp, candidates))
    found = []
    _search(pattern, ctx, order_all, candidates, {}, set(), 0, found,
            first_only)
    return found


def _matches_anchored(pattern, ctx, atom_idx):
    """True when the pattern embeds with node 0 pinned to ``atom_idx``."""
    candidates = _prepare(pattern, ctx)
    if candidates is None or atom_idx not in candidates[0][1]:
        return False
    order_all = [0]
    for comp in pattern.components:
        rest = [n for n in _order_component(pattern, comp, candidates)
                if n != 0]
        # Re-anchor the component containing node 0 on that node.
        if 0 in comp:
            remaining = set(rest)
            seq = []
            while remaining:
                adjacent = [n for n in remaining
                            if any(m == 0 or m in seq
                                   for m, _ in pattern.adjacency[n])]
                pool = adjacent or sorted(remaining)
                nxt = min(pool, key=lambda n: (len(candidates[n][0]), n))
                seq.append(nxt)
                remaining.discard(nxt)
            order_all.extend(seq)
        else:
            order_all.extend(rest)
    found = []
    _search(pattern, ctx, order_all, candidates, {0: atom_idx}, {atom_idx},
            1, found, True)
    return bool(found)


@dataclass(frozen=True)
class MatchResult:
    """An injective pattern-node to molecule-atom embedding."""

    mapping: tuple          # tuple of (node, atom) pairs, node-ordered
    atoms: frozenset        # matched atom indices

    def atom_list(self):
        return sorted(self.atoms)


def match_all(pattern: Pattern, mol: Molecule) -> list:
    """Every embedding of the pattern, deduplicated by atom set and
    ordered by sorted atom indices."""
    raw = _run(pattern, mol, first_only=False)
    by_set = {}
    for mapping in raw:
        key = frozenset(mapping.values())
        if key not in by_set:
            by_set[key] = mapping
    results = [MatchResult(mapping=tuple(sorted(m.items())),
                           atoms=frozenset(m.values()))
               for m in by_set.values()]
    results.sort(key=lambda r: sorted(r.atoms))
    return results


def has_match(pattern: Pattern, mol: Molecule) -> bool:
    """True iff at least one embedding exists; stops at the first."""
    return bool(_run(pattern, mol, first_only=True))
