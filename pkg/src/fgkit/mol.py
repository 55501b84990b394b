"""Molecular graphs parsed from SMILES.

The parser covers the organic subset, bracket atoms (isotope, charge,
explicit hydrogens, atom maps, chirality tags), branches, ring-bond
digits including %nn, aromatic lowercase atoms, and dot-separated
fragments.  Chirality and bond direction are recorded but play no part
in matching or canonical identity; all downstream consumers work at the
constitution level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .elements import (ATOMIC_NUMBER, AROMATIC_SYMBOLS, NORMAL_VALENCES,
                       ORGANIC_SUBSET, SYMBOL)
from .rings import find_bridges, sssr

SINGLE, DOUBLE, TRIPLE, AROMATIC = 1, 2, 3, 4

ORDER_NAMES = {SINGLE: "single", DOUBLE: "double",
               TRIPLE: "triple", AROMATIC: "aromatic"}

_BOND_CHARS = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE, ":": AROMATIC,
               "/": SINGLE, "\\": SINGLE}


class SmilesError(ValueError):
    """Raised for malformed or chemically invalid SMILES input."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (position {position})"
        super().__init__(message)
        self.position = position


@dataclass
class Atom:
    index: int
    atomic_number: int
    charge: int = 0
    isotope: int | None = None
    aromatic: bool = False
    explicit_h: int = 0
    implicit_h: int = 0
    map_number: int | None = None
    in_ring: bool = False
    bracket: bool = False
    chirality: str | None = None
    component: int = 0
    # Derived attributes filled in when the molecule is finalised.
    heavy_degree: int = 0
    h_neighbors: int = 0
    ring_count: int = 0
    ring_sizes: tuple = ()
    valence: int = 0

    @property
    def total_h(self):
        return self.implicit_h + self.explicit_h + self.h_neighbors

    @property
    def symbol(self):
        return SYMBOL[self.atomic_number]


@dataclass
class Bond:
    a1: int
    a2: int
    order: int = SINGLE
    in_ring: bool = False
    direction: str | None = None
    explicit_aromatic: bool = False

    def other(self, idx):
        return self.a2 if idx == self.a1 else self.a1

    @property
    def order_value(self):
        # Bond-order contribution used in valence sums.
        return 1.5 if self.order == AROMATIC else float(self.order)


@dataclass
class Molecule:
    atoms: list = field(default_factory=list)
    bonds: list = field(default_factory=list)
    rings: list = field(default_factory=list)

    def __post_init__(self):
        self._adj = [[] for _ in self.atoms]
        for bond in self.bonds:
            self._adj[bond.a1].append((bond.a2, bond))
            self._adj[bond.a2].append((bond.a1, bond))

    def neighbors(self, idx):
        return self._adj[idx]

    def bond_between(self, i, j):
        for nbr, bond in self._adj[i]:
            if nbr == j:
                return bond
        return None

    def degree(self, idx):
        return len(self._adj[idx])

    @property
    def n_components(self):
        return max((a.component for a in self.atoms), default=-1) + 1

    def component_atoms(self, comp):
        return [a.index for a in self.atoms if a.component == comp]

    def heavy_atom_count(self):
        return sum(1 for a in self.atoms if a.atomic_number != 1)


def _aromatic_default_h(atom, mol):
    """Implicit hydrogens for a bare lowercase aromatic atom.

    Bare aromatic nitrogen reads as the pyridine-type atom (no H); an
    N-H aromatic nitrogen must be written [nH].
    """
    z = atom.atomic_number
    if z != 6:
        return 0
    degree = mol.degree(atom.index)
    extra = sum(bond.order - 1 for _, bond in mol.neighbors(atom.index)
                if bond.order in (DOUBLE, TRIPLE))
    if extra:
        return max(0, 4 - degree - extra)
    return max(0, 3 - degree)


def _assign_implicit_h(mol, text, written_aromatic, written_sums):
    """Fill implicit hydrogen counts.

    Atoms written lowercase follow the aromatic defaults; atoms written
    aliphatic keep the hydrogen count implied by their written bond
    orders even if a ring was aromatised afterwards (Kekule pyrrole
    keeps its N-H).
    """
    for atom in mol.atoms:
        if atom.bracket:
            atom.implicit_h = 0
            continue
        if written_aromatic[atom.index]:
            atom.implicit_h = _aromatic_default_h(atom, mol)
            continue
        order_sum = written_sums[atom.index]
        valences = NORMAL_VALENCES.get(atom.atomic_number)
        if valences is None:
            atom.implicit_h = 0
            continue
        for v in valences:
            if order_sum <= v:
                atom.implicit_h = v - order_sum
                break
        else:
            raise SmilesError(
                f"valence violation: {atom.symbol} with bond order sum "
                f"{order_sum} exceeds {valences[-1]} in {text!r}")


def _finalize(mol):
    for atom in mol.atoms:
        atom.heavy_degree = sum(1 for n, _ in mol.neighbors(atom.index)
                                if mol.atoms[n].atomic_number != 1)
        atom.h_neighbors = sum(1 for n, _ in mol.neighbors(atom.index)
                               if mol.atoms[n].atomic_number == 1)
    ring_membership = {}
    for ring in mol.rings:
        for idx in ring:
            ring_membership.setdefault(idx, []).append(len(ring))
    for atom in mol.atoms:
        sizes = ring_membership.get(atom.index, [])
        atom.ring_count = len(sizes)
        atom.ring_sizes = tuple(sorted(sizes))
        heavy_sum = sum(b.order_value for n, b in mol.neighbors(atom.index)
                        if mol.atoms[n].atomic_number != 1)
        atom.valence = int(heavy_sum) + atom.total_h
    return mol


class _SmilesParser:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.atoms = []
        self.bonds = []
        self.bond_index = {}

    def error(self, message):
        raise SmilesError(message, self.pos)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        ch = self.text[self.pos]
        self.pos += 1
        return ch

    def add_atom(self, **kwargs):
        atom = Atom(index=len(self.atoms), **kwargs)
        self.atoms.append(atom)
        return atom

    def add_bond(self, i, j, order, direction=None, explicit_aromatic=False):
        if i == j:
            self.error("self-bond")
        key = frozenset((i, j))
        if key in self.bond_index:
            self.error("duplicate bond between atoms")
        bond = Bond(i, j, order, direction=direction,
                    explicit_aromatic=explicit_aromatic)
        self.bonds.append(bond)
        self.bond_index[key] = bond
        return bond

    def parse_number(self):
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        return int(self.text[start:self.pos]) if self.pos > start else None

    def parse_bracket_atom(self):
        open_pos = self.pos
        self.take()  # '['
        isotope = self.parse_number()
        symbol = None
        aromatic = False
        two = self.text[self.pos:self.pos + 2]
        if two and two in ATOMIC_NUMBER:
            symbol, self.pos = two, self.pos + 2
        elif two.lower() in AROMATIC_SYMBOLS and len(two) == 2 and two.islower():
            symbol, aromatic, self.pos = two.capitalize(), True, self.pos + 2
        else:
            ch = self.peek()
            if ch.upper() in ATOMIC_NUMBER and (ch.isupper() or ch in "bcnops"):
                aromatic = ch.islower()
                symbol = ch.upper()
                self.pos += 1
            elif ch == "*":
                self.error("wildcard atoms are not valid in SMILES input")
            else:
                self.error(f"unknown element symbol at '[{ch}'")
        z = ATOMIC_NUMBER.get(symbol)
        if z is None:
            self.error(f"unknown element symbol {symbol!r}")
        chirality = None
        if self.peek() == "@":
            self.take()
            chirality = "@@" if self.peek() == "@" else "@"
            if chirality == "@@":
                self.take()
        explicit_h = 0
        if self.peek() == "H":
            self.take()
            count = self.parse_number()
            explicit_h = 1 if count is None else count
        charge = 0
        while self.peek() in ("+", "-"):
            sign = 1 if self.take() == "+" else -1
            count = self.parse_number()
            if count is not None:
                charge += sign * count
            else:
                charge += sign
                while self.peek() == ("+" if sign > 0 else "-"):
                    self.take()
                    charge += sign
        map_number = None
        if self.peek() == ":":
            self.take()
            map_number = self.parse_number()
            if map_number is None:
                self.error("atom map without a number")
        if self.peek() != "]":
            self.error(f"unclosed bracket atom starting at {open_pos}")
        self.take()
        return self.add_atom(atomic_number=z, charge=charge, isotope=isotope,
                             aromatic=aromatic, explicit_h=explicit_h,
                             map_number=map_number, bracket=True,
                             chirality=chirality)

    def parse_bare_atom(self):
        two = self.text[self.pos:self.pos + 2]
        if two in ("Cl", "Br"):
            self.pos += 2
            return self.add_atom(atomic_number=ATOMIC_NUMBER[two])
        ch = self.peek()
        if ch in ORGANIC_SUBSET:
            self.pos += 1
            return self.add_atom(atomic_number=ATOMIC_NUMBER[ch])
        if ch in "bcnops":
            self.pos += 1
            return self.add_atom(atomic_number=ATOMIC_NUMBER[ch.upper()],
                                 aromatic=True)
        self.error(f"unexpected character {ch!r}")

    def parse(self):
        prev = None           # previous atom index in the current chain
        pending = None        # bond char before the next atom/ring digit
        branch_stack = []
        ring_open = {}        # digit -> (atom index, bond char, position)
        component = 0
        saw_atom_in_component = False

        while self.pos < len(self.text):
            ch = self.peek()
            if ch == "(":
                if prev is None:
                    self.error("branch before any atom")
                branch_stack.append(prev)
                self.take()
            elif ch == ")":
                if not branch_stack:
                    self.error("unmatched ')'")
                prev = branch_stack.pop()
                self.take()
            elif ch in _BOND_CHARS:
                if pending is not None:
                    self.error("two bond symbols in a row")
                pending = self.take()
            elif ch == ".":
                if branch_stack:
                    self.error("dot inside a branch")
                if pending is not None:
                    self.error("bond symbol before '.'")
                if not saw_atom_in_component:
                    self.error("empty fragment around '.'")
                self.take()
                prev = None
                component += 1
                saw_atom_in_component = False
            elif ch.isdigit() or ch == "%":
                if prev is None:
                    self.error("ring bond digit before any atom")
                if ch == "%":
                    self.take()
                    digits = self.text[self.pos:self.pos + 2]
                    if len(digits) != 2 or not digits.isdigit():
                        self.error("'%' ring bond needs two digits")
                    self.pos += 2
                    label = int(digits)
                else:
                    label = int(self.take())
                if label in ring_open:
                    start, open_bond, _ = ring_open.pop(label)
                    if open_bond and pending and open_bond != pending:
                        self.error(
                            f"ring bond {label} opened as {open_bond!r} "
                            f"but closed as {pending!r}")
                    bond_char = pending or open_bond
                    order = _BOND_CHARS[bond_char] if bond_char else None
                    direction = bond_char if bond_char in ("/", "\\") else None
                    if order is None:
                        a, b = self.atoms[start], self.atoms[prev]
                        order = AROMATIC if (a.aromatic and b.aromatic) else SINGLE
                    self.add_bond(start, prev, order, direction,
                                  explicit_aromatic=bond_char == ":")
                else:
                    ring_open[label] = (prev, pending, self.pos)
                pending = None
            elif ch == "[" or ch.isalpha() or ch == "*":
                atom = (self.parse_bracket_atom() if ch == "["
                        else self.parse_bare_atom())
                atom.component = component
                saw_atom_in_component = True
                if prev is not None:
                    order = _BOND_CHARS[pending] if pending else None
                    direction = pending if pending in ("/", "\\") else None
                    if order is None:
                        a, b = self.atoms[prev], atom
                        order = AROMATIC if (a.aromatic and b.aromatic) else SINGLE
                    self.add_bond(prev, atom.index, order, direction,
                                  explicit_aromatic=pending == ":")
                elif pending is not None:
                    self.error("bond symbol with no preceding atom")
                prev = atom.index
                pending = None
            else:
                self.error(f"unexpected character {ch!r}")

        if branch_stack:
            self.error("unclosed branch")
        if ring_open:
            label, (_, _, where) = sorted(ring_open.items())[0]
            raise SmilesError(f"unclosed ring bond {label}", where)
        if pending is not None:
            self.error("dangling bond symbol")
        if not self.atoms:
            self.error("no atoms")
        if not saw_atom_in_component:
            self.error("dangling '.'")
        return self.atoms, self.bonds


def parse_smiles(text: str) -> Molecule:
    """Parse a SMILES string into a Molecule.

    Rings are perceived, aromaticity is resolved (Kekule input is
    aromatised, lowercase input is validated), and implicit hydrogens
    are assigned.  Dot-separated input yields one Molecule with several
    components.
    """
    if text is None:
        raise SmilesError("empty SMILES")
    stripped = text.strip()
    if not stripped:
        raise SmilesError("empty SMILES")
    atoms, bonds = _SmilesParser(stripped).parse()
    mol = Molecule(atoms=atoms, bonds=bonds)

    adjacency = [[n for n, _ in mol.neighbors(i)] for i in range(len(atoms))]
    _label_components(mol, adjacency)
    bridges = find_bridges(len(atoms), adjacency)
    for bond in bonds:
        bond.in_ring = frozenset((bond.a1, bond.a2)) not in bridges
    for atom in atoms:
        atom.in_ring = any(b.in_ring for _, b in mol.neighbors(atom.index))
    mol.rings = sssr(len(atoms), adjacency, [(b.a1, b.a2) for b in bonds])

    written_aromatic = [a.aromatic for a in atoms]
    written_sums = []
    for i in range(len(atoms)):
        total = sum(b.order_value for _, b in mol.neighbors(i))
        written_sums.append(int(total + 0.999999))

    from .aromaticity import resolve_aromaticity
    resolve_aromaticity(mol, stripped, written_aromatic, written_sums)
    _assign_implicit_h(mol, stripped, written_aromatic, written_sums)
    _validate(mol, stripped)
    return _finalize(mol)


def _label_components(mol, adjacency):
    # Ring-bond digits may join dot-separated pieces, so components come
    # from final connectivity rather than dot positions.
    comp = [-1] * len(mol.atoms)
    current = 0
    for start in range(len(mol.atoms)):
        if comp[start] >= 0:
            continue
        stack = [start]
        comp[start] = current
        while stack:
            node = stack.pop()
            for nbr in adjacency[node]:
                if comp[nbr] < 0:
                    comp[nbr] = current
                    stack.append(nbr)
        current += 1
    for atom in mol.atoms:
        atom.component = comp[atom.index]


def _validate(mol, text):
    for bond in mol.bonds:
        if bond.order == AROMATIC:
            a, b = mol.atoms[bond.a1], mol.atoms[bond.a2]
            if not (a.aromatic and b.aromatic):
                raise SmilesError(
                    f"aromatic bond between non-aromatic atoms in {text!r}")
    for atom in mol.atoms:
        if atom.bracket or atom.aromatic:
            continue
        valences = NORMAL_VALENCES.get(atom.atomic_number)
        if valences is None:
            continue
        total = atom.implicit_h + atom.explicit_h + mol.degree(atom.index)
        if total > valences[-1]:
            raise SmilesError(
                f"valence violation on atom {atom.index} ({atom.symbol}) "
                f"in {text!r}")


def ring_info(mol: Molecule) -> list:
    """The molecule's SSSR as a list of atom-index tuples."""
    return list(mol.rings)
