"""Atom-mapped reaction parsing, reaction-center detection, and
functional-group change sets.

A mapped atom is a reaction center when its incident mapped-bond
multiset changes between sides, a bond to an unmapped atom appears or
disappears, or its hydrogen count changes.  Reacting groups are
reactant-side groups that contain a center and do not survive into the
products (by map-number image); resulting groups are the mirror image.
Ring events are computed on rings whose atoms are mapped on both sides,
so spectator rings never register.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import Catalog, default_catalog, perceive
from .mol import ORDER_NAMES, Molecule, SmilesError, parse_smiles

REACTANTS, REAGENTS, PRODUCTS = "reactants", "reagents", "products"


class ReactionError(ValueError):
    """Raised for malformed or unannotatable reaction input."""


@dataclass
class Reaction:
    reactants: list
    reagents: list
    products: list
    source: str = ""

    def side(self, name):
        return getattr(self, name)

    def mapped_atoms(self, side):
        """(molecule index, atom index, map number) triples."""
        out = []
        for mi, mol in enumerate(self.side(side)):
            for atom in mol.atoms:
                if atom.map_number is not None:
                    out.append((mi, atom.index, atom.map_number))
        return out

    def side_map(self, side):
        """map number -> (molecule index, atom index) for one side."""
        table = {}
        for mi, ai, num in self.mapped_atoms(side):
            if num in table:
                raise ReactionError(
                    f"duplicate atom map {num} on the {side} side")
            table[num] = (mi, ai)
        return table

    @property
    def map_index(self):
        """map number -> list of (side, molecule index, atom index)."""
        table = {}
        for side in (REACTANTS, REAGENTS, PRODUCTS):
            for mi, ai, num in self.mapped_atoms(side):
                table.setdefault(num, []).append((side, mi, ai))
        return table

    @property
    def quality(self):
        """ok | partial-mapping | unbalanced."""
        reactant_maps = {n for _, _, n in self.mapped_atoms(REACTANTS)}
        product_maps = {n for _, _, n in self.mapped_atoms(PRODUCTS)}
        if product_maps - reactant_maps:
            return "unbalanced"
        for mol in self.products:
            for atom in mol.atoms:
                if atom.map_number is None:
                    return "partial-mapping"
        return "ok"


def parse_reaction(text: str) -> Reaction:
    """Parse ``reactants>reagents>products`` reaction SMILES."""
    if not text or not text.strip():
        raise ReactionError("empty reaction SMILES")
    stripped = text.strip()
    parts = stripped.split(">")
    if len(parts) != 3:
        raise ReactionError(
            f"reaction must have the form reactants>reagents>products, "
            f"found {len(parts) - 1} '>' separators")

    def parse_side(chunk, side):
        mols = []
        if not chunk:
            return mols
        for fragment in chunk.split("."):
            if not fragment:
                raise ReactionError(f"empty fragment on the {side} side")
            try:
                mols.append(parse_smiles(fragment))
            except SmilesError as exc:
                raise ReactionError(f"{side}: {exc}") from exc
        return mols

    reactants = parse_side(parts[0], REACTANTS)
    reagents = parse_side(parts[1], REAGENTS)
    products = parse_side(parts[2], PRODUCTS)
    if not reactants or not products:
        raise ReactionError("reactants and products must be non-empty")
    rxn = Reaction(reactants=reactants, reagents=reagents,
                   products=products, source=stripped)
    rxn.side_map(REACTANTS)   # raises on duplicate map numbers
    rxn.side_map(PRODUCTS)
    return rxn


@dataclass
class ReactionCenters:
    reactant_atoms: set      # (molecule index, atom index)
    product_atoms: set
    map_numbers: set


def _environment(mol, atom_idx):
    """(mapped-bond multiset, unmapped-bond multiset, hydrogen count)."""
    atom = mol.atoms[atom_idx]
    mapped = []
    unmapped = []
    for nbr, bond in mol.neighbors(atom_idx):
        nbr_map = mol.atoms[nbr].map_number
        if nbr_map is None:
            unmapped.append(bond.order)
        else:
            mapped.append((nbr_map, bond.order))
    return (sorted(mapped), sorted(unmapped), atom.total_h)


def reaction_centers(rxn: Reaction) -> ReactionCenters:
    """Mapped atoms whose bonding or hydrogen count changes."""
    r_map = rxn.side_map(REACTANTS)
    p_map = rxn.side_map(PRODUCTS)
    if not r_map or not p_map:
        raise ReactionError("unannotated reaction: no atom maps")

    centers_r, centers_p, nums = set(), set(), set()
    for num, (mi, ai) in r_map.items():
        loc_p = p_map.get(num)
        if loc_p is None:
            centers_r.add((mi, ai))
            nums.add(num)
            continue
        env_r = _environment(rxn.reactants[mi], ai)
        env_p = _environment(rxn.products[loc_p[0]], loc_p[1])
        if env_r != env_p:
            centers_r.add((mi, ai))
            centers_p.add(loc_p)
            nums.add(num)
    for num, (mi, ai) in p_map.items():
        if num not in r_map:
            centers_p.add((mi, ai))
            nums.add(num)
    return ReactionCenters(reactant_atoms=centers_r,
                           product_atoms=centers_p, map_numbers=nums)


@dataclass(frozen=True)
class RxnGroup:
    """A functional-group instance on one molecule of a reaction side."""
    name: str
    molecule: int
    atoms: tuple

    def to_dict(self):
        return {"name": self.name, "molecule": self.molecule,
                "atoms": list(self.atoms)}


@dataclass
class ChangeSet:
    reacting_groups: list = field(default_factory=list)
    resulting_groups: list = field(default_factory=list)
    rings_broken: list = field(default_factory=list)     # ring sizes
    rings_formed: list = field(default_factory=list)
    extra_bond_changes: list = field(default_factory=list)
    quality: str = "ok"

    def is_empty(self):
        return not (self.reacting_groups or self.resulting_groups
                    or self.rings_broken or self.rings_formed
                    or self.extra_bond_changes)

    def group_name_multisets(self):
        return (sorted(g.name for g in self.reacting_groups),
                sorted(g.name for g in self.resulting_groups))

    def to_dict(self):
        return {
            "reacting_groups": [g.to_dict() for g in self.reacting_groups],
            "resulting_groups": [g.to_dict() for g in self.resulting_groups],
            "rings_broken": {"count": len(self.rings_broken),
                             "sizes": list(self.rings_broken)},
            "rings_formed": {"count": len(self.rings_formed),
                             "sizes": list(self.rings_formed)},
            "extra_bond_changes": list(self.extra_bond_changes),
            "quality": self.quality,
            "description": describe(self),
        }


def _group_identity(mols, group):
    """(name, mapped-atom image, unmapped count) identity for the
    appears-on-the-other-side test."""
    mol = mols[group.molecule]
    mapped = []
    unmapped = 0
    for ai in group.atoms:
        num = mol.atoms[ai].map_number
        if num is None:
            unmapped += 1
        else:
            mapped.append(num)
    return (group.name, frozenset(mapped), unmapped)


def _side_groups(mols, catalog):
    groups = []
    for mi, mol in enumerate(mols):
        for match in perceive(mol, catalog):
            groups.append(RxnGroup(name=match.group_name, molecule=mi,
                                   atoms=match.atoms))
    return groups


def _map_bonds(mols, side_map):
    """Bonds between both-side-mapped atoms: {frozenset(maps): order}."""
    by_loc = {loc: num for num, loc in side_map.items()}
    table = {}
    for mi, mol in enumerate(mols):
        for bond in mol.bonds:
            m1 = by_loc.get((mi, bond.a1))
            m2 = by_loc.get((mi, bond.a2))
            if m1 is not None and m2 is not None:
                table[frozenset((m1, m2))] = bond.order
    return table


def _ring_events(from_mols, from_map, to_bonds, shared):
    """Sizes of rings on the from-side (atoms fully mapped to the other
    side) that lose at least one bond on the to-side."""
    by_loc = {loc: num for num, loc in from_map.items()}
    sizes = []
    for mi, mol in enumerate(from_mols):
        for ring in mol.rings:
            nums = [by_loc.get((mi, ai)) for ai in ring]
            if any(n is None or n not in shared for n in nums):
                continue
            intact = True
            for k in range(len(nums)):
                pair = frozenset((nums[k], nums[(k + 1) % len(nums)]))
                if pair not in to_bonds:
                    intact = False
                    break
            if not intact:
                sizes.append(len(ring))
    return sorted(sizes)


def fg_changes(rxn: Reaction, catalog: Catalog | None = None) -> ChangeSet:
    """Functional-group and structural changes of a mapped reaction."""
    if catalog is None:
        catalog = default_catalog()
    centers = reaction_centers(rxn)

    r_groups = _side_groups(rxn.reactants, catalog)
    p_groups = _side_groups(rxn.products, catalog)
    r_identities = {_group_identity(rxn.reactants, g) for g in r_groups}
    p_identities = {_group_identity(rxn.products, g) for g in p_groups}

    reacting = [g for g in r_groups
                if any((g.molecule, ai) in centers.reactant_atoms
                       for ai in g.atoms)
                and _group_identity(rxn.reactants, g) not in p_identities]
    resulting = [g for g in p_groups
                 if any((g.molecule, ai) in centers.product_atoms
                        for ai in g.atoms)
                 and _group_identity(rxn.products, g) not in r_identities]

    r_map = rxn.side_map(REACTANTS)
    p_map = rxn.side_map(PRODUCTS)
    shared = set(r_map) & set(p_map)
    r_bonds = _map_bonds(rxn.reactants, r_map)
    p_bonds = _map_bonds(rxn.products, p_map)
    rings_broken = _ring_events(rxn.reactants, r_map, p_bonds, shared)
    rings_formed = _ring_events(rxn.products, p_map, r_bonds, shared)

    footprints = []
    for g in reacting:
        mol = rxn.reactants[g.molecule]
        footprints.append({mol.atoms[ai].map_number for ai in g.atoms}
                          - {None})
    for g in resulting:
        mol = rxn.products[g.molecule]
        footprints.append({mol.atoms[ai].map_number for ai in g.atoms}
                          - {None})

    extra = []
    for pair in sorted(set(r_bonds) | set(p_bonds), key=sorted):
        if not pair <= shared:
            continue
        before = r_bonds.get(pair)
        after = p_bonds.get(pair)
        if before == after:
            continue
        if any(pair <= fp for fp in footprints):
            continue
        m1, m2 = sorted(pair)
        extra.append({"atoms": [m1, m2],
                      "before": ORDER_NAMES.get(before),
                      "after": ORDER_NAMES.get(after)})

    reacting.sort(key=lambda g: (g.name, g.molecule, g.atoms))
    resulting.sort(key=lambda g: (g.name, g.molecule, g.atoms))
    return ChangeSet(reacting_groups=reacting, resulting_groups=resulting,
                     rings_broken=rings_broken, rings_formed=rings_formed,
                     extra_bond_changes=extra, quality=rxn.quality)


def _join_names(names):
    unique = sorted(set(names))
    if len(unique) == 1:
        return unique[0]
    return ", ".join(unique[:-1]) + " and " + unique[-1]


def _ring_phrase(sizes, verb):
    if len(sizes) == 1:
        return f"1 ring {verb} (size {sizes[0]})"
    return (f"{len(sizes)} rings {verb} "
            f"(sizes {', '.join(str(s) for s in sizes)})")


def describe(change: ChangeSet) -> str:
    """Deterministic one-sentence change summary."""
    if change.is_empty():
        return "No functional-group change detected."
    reacting, resulting = change.group_name_multisets()
    if reacting and resulting:
        base = (f"Reaction between {_join_names(reacting)} "
                f"forming {_join_names(resulting)}")
    elif reacting:
        base = f"Reaction consuming {_join_names(reacting)}"
    elif resulting:
        base = f"Reaction forming {_join_names(resulting)}"
    else:
        base = "Reaction with structural changes only"
    parts = [base]
    if change.rings_broken:
        parts.append(_ring_phrase(change.rings_broken, "broken"))
    if change.rings_formed:
        parts.append(_ring_phrase(change.rings_formed, "formed"))
    if change.extra_bond_changes:
        n = len(change.extra_bond_changes)
        parts.append(f"{n} other bond change{'s' if n != 1 else ''}")
    return "; ".join(parts) + "."
