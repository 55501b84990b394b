"""The functional-group catalog: 241 named SMARTS definitions across 10
heteroatom categories, plus perception with subset shadowing."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .mol import Molecule
from .smarts import Pattern, SmartsError, match_all, parse_smarts

EXPECTED_TOTAL = 241
EXPECTED_CATEGORY_COUNTS = {
    "Hydrocarbon Groups": 7,
    "Boron Groups": 6,
    "Oxygen Groups": 36,
    "Nitrogen Groups": 62,
    "Sulfur Groups": 85,
    "Silicon Groups": 5,
    "Phosphorus Groups": 17,
    "Halogen Groups": 14,
    "Organometallic Groups": 5,
    "Aromatic": 4,
}


class CatalogError(ValueError):
    """Raised when a catalog file fails validation."""


@dataclass(frozen=True)
class FunctionalGroupDef:
    name: str
    category: str
    smarts: str
    positive_example: str
    negative_example: str
    pattern: Pattern
    priority: int       # heavy-atom count of the pattern
    order: int          # position in the catalog, breaks priority ties


@dataclass(frozen=True)
class FGMatch:
    group_name: str
    atoms: tuple        # sorted atom indices

    def to_dict(self):
        return {"name": self.group_name, "atoms": list(self.atoms)}


class Catalog:
    def __init__(self, definitions):
        self.definitions = list(definitions)
        self._by_name = {d.name: d for d in self.definitions}

    def __len__(self):
        return len(self.definitions)

    def __iter__(self):
        return iter(self.definitions)

    def get(self, name):
        return self._by_name.get(name)

    def category_count(self, category):
        return sum(1 for d in self.definitions if d.category == category)

    def category_counts(self):
        return Counter(d.category for d in self.definitions)


def _required_elements(expr, pattern):
    """Atomic numbers every match of the pattern must contain; used as a
    cheap prescreen.  Conservative: only top-level AND chains count."""
    if expr[0] == "elem":
        return {expr[1]}
    if expr[0] == "and":
        found = set()
        for term in expr[1]:
            found |= _required_elements(term, pattern)
        return found
    return set()


def _pattern_required(pattern):
    req = set()
    for node in pattern.nodes:
        found = _required_elements(node, pattern)
        if found:
            # A node needs exactly one element; several would be
            # contradictory, keep the first deterministically.
            req.add(sorted(found)[0])
    return frozenset(req)


def bundled_catalog_text():
    """The bundled catalog file, verbatim."""
    return (resources.files("fgkit") / "data" / "functional_groups.tsv") \
        .read_text(encoding="utf-8")


def parse_catalog_text(text, enforce_counts=False):
    definitions = []
    names = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise CatalogError(
                f"line {lineno}: expected 5 tab-separated fields, "
                f"got {len(fields)}")
        name, category, smarts, positive, negative = \
            (f.strip() for f in fields)
        if name in names:
            raise CatalogError(f"line {lineno}: duplicate name {name!r}")
        names.add(name)
        try:
            pattern = parse_smarts(smarts)
        except SmartsError as exc:
            raise CatalogError(
                f"line {lineno}: bad SMARTS for {name!r}: {exc}") from exc
        definitions.append(FunctionalGroupDef(
            name=name, category=category, smarts=smarts,
            positive_example=positive, negative_example=negative,
            pattern=pattern, priority=len(pattern.nodes),
            order=len(definitions)))

    if enforce_counts:
        counts = Counter(d.category for d in definitions)
        if len(definitions) != EXPECTED_TOTAL:
            raise CatalogError(
                f"bundled catalog must hold {EXPECTED_TOTAL} definitions, "
                f"found {len(definitions)}")
        if dict(counts) != EXPECTED_CATEGORY_COUNTS:
            raise CatalogError(
                f"bundled catalog category counts {dict(counts)} do not "
                f"match the expected sizes {EXPECTED_CATEGORY_COUNTS}")
    return Catalog(definitions)


def load_catalog(source=None):
    """Load a catalog file, or the bundled 241-group default."""
    if source is None:
        return parse_catalog_text(bundled_catalog_text(),
                                  enforce_counts=True)
    with open(source, encoding="utf-8") as fh:
        return parse_catalog_text(fh.read())


_default_catalog = None


def default_catalog():
    global _default_catalog
    if _default_catalog is None:
        _default_catalog = load_catalog()
    return _default_catalog


def _raw_matches(mol, catalog):
    elements = {a.atomic_number for a in mol.atoms}
    out = []
    for definition in catalog:
        required = getattr(definition.pattern, "_required", None)
        if required is None:
            required = _pattern_required(definition.pattern)
            definition.pattern._required = required
        if not required <= elements:
            continue
        for match in match_all(definition.pattern, mol):
            out.append((definition, match.atoms))
    return out


def perceive(mol: Molecule, catalog: Catalog | None = None) -> list:
    """All functional-group instances in the molecule.

    A match whose atom set is a strict subset of another match's atom
    set is shadowed (the larger pattern wins); overlapping but
    non-nested matches are all reported.  Result is sorted by
    (group name, atoms).
    """
    if catalog is None:
        catalog = default_catalog()
    raw = _raw_matches(mol, catalog)
    atom_sets = [atoms for _, atoms in raw]
    kept = []
    for definition, atoms in raw:
        shadowed = any(atoms < other for other in atom_sets)
        if not shadowed:
            kept.append(FGMatch(group_name=definition.name,
                                atoms=tuple(sorted(atoms))))
    kept.sort(key=lambda m: (m.group_name, m.atoms))
    return kept


def fg_histogram(match_lists) -> dict:
    """Counts per group name over a stream of perceive() outputs."""
    counts = Counter()
    for matches in match_lists:
        for match in matches:
            counts[match.group_name] += 1
    return dict(sorted(counts.items()))
