"""Canonical and randomized SMILES output.

Canonical form comes from iterative invariant refinement seeded by
(atomic number, charge, degree, total hydrogens, aromatic flag, ring
flag, isotope), with remaining ties broken by choosing the atom whose
individualization yields the lexicographically smallest rendering.
Atom maps and stereo annotations never influence canonical identity and
are omitted from canonical output.
"""

from __future__ import annotations

import random

from .elements import ORGANIC_SUBSET
from .mol import (AROMATIC, DOUBLE, SINGLE, TRIPLE, Molecule, SmilesError,
                  _aromatic_default_h, parse_smiles)
from .elements import NORMAL_VALENCES

_AROMATIC_BARE = {"B", "C", "N", "O", "P", "S"}


def _reader_implicit_h(mol, atom):
    """Hydrogen count a reader would infer for this atom written bare."""
    if atom.aromatic:
        return _aromatic_default_h(atom, mol)
    order_sum = 0
    for _, bond in mol.neighbors(atom.index):
        order_sum += bond.order if bond.order != AROMATIC else 0
    valences = NORMAL_VALENCES.get(atom.atomic_number)
    if not valences:
        return None
    for v in valences:
        if order_sum <= v:
            return v - order_sum
    return None


def _atom_token(mol, atom, include_maps):
    own_h = atom.implicit_h + atom.explicit_h
    symbol = atom.symbol
    writable = (symbol in ORGANIC_SUBSET if not atom.aromatic
                else symbol in _AROMATIC_BARE)
    plain = (atom.isotope is None and atom.charge == 0
             and atom.atomic_number != 1 and writable
             and not (include_maps and atom.map_number is not None))
    if plain and _reader_implicit_h(mol, atom) == own_h:
        return symbol.lower() if atom.aromatic else symbol

    parts = ["["]
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(symbol.lower() if atom.aromatic else symbol)
    if own_h == 1:
        parts.append("H")
    elif own_h > 1:
        parts.append(f"H{own_h}")
    if atom.charge:
        sign = "+" if atom.charge > 0 else "-"
        parts.append(sign if abs(atom.charge) == 1
                     else f"{sign}{abs(atom.charge)}")
    if include_maps and atom.map_number is not None:
        parts.append(f":{atom.map_number}")
    parts.append("]")
    return "".join(parts)


def _bond_char(mol, bond):
    if bond.order == DOUBLE:
        return "="
    if bond.order == TRIPLE:
        return "#"
    if bond.order == AROMATIC:
        return ""
    a, b = mol.atoms[bond.a1], mol.atoms[bond.a2]
    if a.aromatic and b.aromatic:
        return "-"  # biaryl-type single bond needs to stay single on reread
    return ""


def _closure_digit(n):
    if n < 10:
        return str(n)
    if n < 100:
        return f"%{n:02d}"
    raise SmilesError("more than 99 simultaneously open ring bonds")


def _render_component(mol, atoms, priority, root, include_maps):
    """Write one connected component starting at ``root`` following
    ``priority`` for neighbour ordering."""
    order_of = {a: priority[a] for a in atoms}

    def nbr_iter(u):
        return sorted(((n, b) for n, b in mol.neighbors(u)),
                      key=lambda nb: order_of[nb[0]])

    visited = {root}
    children = {a: [] for a in atoms}
    closures_at = {a: [] for a in atoms}
    used = set()
    stack = [(root, nbr_iter(root))]
    closure_id = 0
    while stack:
        u, it = stack[-1]
        advanced = False
        for nbr, bond in it:
            key = id(bond)
            if key in used:
                continue
            used.add(key)
            if nbr in visited:
                closures_at[nbr].append((closure_id, "open", bond))
                closures_at[u].append((closure_id, "close", bond))
                closure_id += 1
            else:
                visited.add(nbr)
                children[u].append((nbr, bond))
                stack.append((nbr, nbr_iter(nbr)))
                advanced = True
                break
        if not advanced:
            stack.pop()

    digit_for = {}
    free_digits = list(range(99, 0, -1))
    out = []
    work = [("atom", root, None)]
    while work:
        item = work.pop()
        if item[0] == "text":
            out.append(item[1])
            continue
        _, u, inbond = item
        if inbond is not None:
            out.append(_bond_char(mol, inbond))
        out.append(_atom_token(mol, mol.atoms[u], include_maps))
        for cid, side, bond in closures_at[u]:
            if side == "open":
                digit = free_digits.pop()
                digit_for[cid] = digit
                out.append(_bond_char(mol, bond))
                out.append(_closure_digit(digit))
            else:
                digit = digit_for.pop(cid)
                out.append(_closure_digit(digit))
                free_digits.append(digit)
        kids = children[u]
        pending = []
        for i, (child, bond) in enumerate(kids):
            if i == len(kids) - 1:
                pending.append(("atom", child, bond))
            else:
                pending.append(("text", "("))
                pending.append(("atom", child, bond))
                pending.append(("text", ")"))
        work.extend(reversed(pending))
    return "".join(out)


def _initial_ranks(mol, atoms):
    sig = {}
    for i in atoms:
        a = mol.atoms[i]
        sig[i] = (a.atomic_number, a.charge, mol.degree(i), a.total_h,
                  a.aromatic, a.in_ring, a.isotope or 0)
    return _dense(sig, atoms)


def _dense(sig, atoms):
    order = {s: r for r, s in enumerate(sorted(set(sig.values())))}
    return {i: order[sig[i]] for i in atoms}


def _refine(mol, atoms, ranks):
    n_classes = len(set(ranks.values()))
    while True:
        sig = {}
        for i in atoms:
            nb = sorted((bond.order, ranks[n]) for n, bond in mol.neighbors(i))
            sig[i] = (ranks[i], tuple(nb))
        new_ranks = _dense(sig, atoms)
        new_n = len(set(new_ranks.values()))
        if new_n == n_classes:
            return new_ranks
        ranks, n_classes = new_ranks, new_n


def _min_string(mol, atoms, ranks, include_maps):
    groups = {}
    for i in atoms:
        groups.setdefault(ranks[i], []).append(i)
    tied = sorted(r for r, members in groups.items() if len(members) > 1)
    if not tied:
        root = min(atoms, key=lambda i: ranks[i])
        return _render_component(mol, atoms, ranks, root, include_maps)
    best = None
    for cand in sorted(groups[tied[0]]):
        bumped = {i: ranks[i] * 2 + (0 if i == cand else 1) for i in atoms}
        refined = _refine(mol, atoms, _dense(bumped, atoms))
        rendered = _min_string(mol, atoms, refined, include_maps)
        if best is None or rendered < best:
            best = rendered
    return best


def write_canonical(mol: Molecule) -> str:
    """Deterministic SMILES; equal for all renderings of one molecule."""
    pieces = []
    for comp in range(mol.n_components):
        atoms = mol.component_atoms(comp)
        ranks = _refine(mol, atoms, _initial_ranks(mol, atoms))
        pieces.append(_min_string(mol, atoms, ranks, include_maps=False))
    return ".".join(sorted(pieces))


def random_render(mol: Molecule, rng: random.Random,
                  include_maps: bool = False) -> str:
    """One randomized rendering (random start atom and branch order)."""
    pieces = []
    for comp in range(mol.n_components):
        atoms = mol.component_atoms(comp)
        shuffled = atoms[:]
        rng.shuffle(shuffled)
        priority = {a: i for i, a in enumerate(shuffled)}
        root = rng.choice(atoms)
        pieces.append(_render_component(mol, atoms, priority, root,
                                        include_maps))
    return ".".join(pieces)


def enumerate_random(mol: Molecule, count: int, seed: int,
                     include_maps: bool = False) -> list:
    """Up to ``count`` distinct randomized renderings, deterministic per
    seed.  Tiny molecules may admit fewer distinct strings."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = random.Random(seed)
    seen = set()
    out = []
    attempts = 0
    limit = max(count * 10, 20)
    while len(out) < count and attempts < limit:
        attempts += 1
        s = random_render(mol, rng, include_maps)
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def canonical_equal(smiles_a: str, smiles_b: str) -> bool:
    return write_canonical(parse_smiles(smiles_a)) == \
        write_canonical(parse_smiles(smiles_b))
