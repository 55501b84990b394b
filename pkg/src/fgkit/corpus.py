"""Corpus construction: record formatting, leakage exclusion,
deduplication, reaction augmentation, mix planning, and statistics.

Records flow through order-preserving stream stages; every stage is
seeded explicitly so a corpus build is byte-reproducible.
"""

from __future__ import annotations

import json
import math
import random
import re
from dataclasses import dataclass, field

from .canon import random_render, write_canonical
from .catalog import fg_histogram
from .mol import SmilesError, parse_smiles
from .reaction import ChangeSet, Reaction, ReactionError, parse_reaction

FORMATS = ("markdown_list", "markdown_table", "json_dict")

_RESERVED_KEYS = {"smiles", "description", "functional groups"}


@dataclass
class MoleculeRecord:
    smiles: str
    names: dict = field(default_factory=dict)
    description: str | None = None
    properties: dict = field(default_factory=dict)
    fg_annotation: list | None = None
    source_id: str = ""
    canonical: str | None = None

    def __post_init__(self):
        clash = (_RESERVED_KEYS | set(self.names)) & set(self.properties)
        if clash:
            raise ValueError(f"property keys collide with reserved or name "
                             f"keys: {sorted(clash)}")


@dataclass
class ReactionRecord:
    rxn_smiles: str
    change: ChangeSet | None = None
    quality: str = "ok"
    augmentations: list = field(default_factory=list)
    source_id: str = ""
    reaction: Reaction | None = None


@dataclass(frozen=True)
class CorpusEntry:
    format: str
    text: str
    source_id: str

    def to_dict(self):
        return {"format": self.format, "text": self.text,
                "source_id": self.source_id}


@dataclass(frozen=True)
class MixPlan:
    quotas: dict
    seed: int

    @property
    def total(self):
        return sum(self.quotas.values())


def canonical_reaction_key(rxn_smiles: str) -> str:
    """Canonical reaction identity: per-side sorted canonical fragments,
    atom maps ignored."""
    parts = rxn_smiles.strip().split(">")
    if len(parts) != 3:
        raise ReactionError("reaction must have exactly two '>' separators")
    sides = []
    for part in parts:
        frags = sorted(write_canonical(parse_smiles(f))
                       for f in part.split(".") if f)
        sides.append(".".join(frags))
    return ">".join(sides)


# ---------------------------------------------------------------------
# Formatting

def _record_pairs(rec: MoleculeRecord, seed: int, kind: str):
    """Key-value pairs: fixed identity head, then a seeded permutation of
    the properties with the functional-group annotation mixed in."""
    head = [("smiles", rec.smiles)]
    for key in sorted(rec.names):
        head.append((key, str(rec.names[key])))
    if rec.description:
        head.append(("description", rec.description))
    props = [(k, str(v)) for k, v in rec.properties.items()]
    if rec.fg_annotation is not None:
        names = sorted({m.group_name for m in rec.fg_annotation})
        props.append(("functional groups",
                      ", ".join(names) if names else "none"))
    rng = random.Random(f"{seed}:{kind}:{rec.smiles}")
    rng.shuffle(props)
    return head + props


def render_pairs(pairs, kind: str) -> str:
    if kind == "markdown_list":
        return "\n".join(f"- {k}: {v}" for k, v in pairs)
    if kind == "markdown_table":
        rows = ["| Property | Value |", "| --- | --- |"]
        rows.extend(f"| {k} | {v} |" for k, v in pairs)
        return "\n".join(rows)
    if kind == "json_dict":
        return json.dumps(dict(pairs), ensure_ascii=False)
    raise ValueError(f"unknown format {kind!r}")


def parse_entry_pairs(text: str, kind: str) -> list:
    """Inverse of render_pairs, for format-equivalence checks."""
    if kind == "json_dict":
        return list(json.loads(text).items())
    pairs = []
    lines = text.splitlines()
    if kind == "markdown_table":
        lines = lines[2:]
        for line in lines:
            cells = [c.strip() for c in line.strip().strip("|").split("|")]
            pairs.append((cells[0], cells[1]))
        return pairs
    for line in lines:
        body = line[2:]
        key, _, value = body.partition(": ")
        pairs.append((key, value))
    return pairs


def format_molecule_entry(rec: MoleculeRecord, kind: str,
                          seed: int) -> CorpusEntry:
    """One corpus entry for a molecule record in the requested format."""
    if kind not in FORMATS:
        raise ValueError(f"unknown format {kind!r}")
    pairs = _record_pairs(rec, seed, kind)
    return CorpusEntry(format=kind, text=render_pairs(pairs, kind),
                       source_id=rec.source_id or rec.smiles)


def format_reaction_entry(rec: ReactionRecord, rendering: str, kind: str,
                          seed: int) -> CorpusEntry:
    pairs = [("reaction", rendering)]
    if rec.change is not None:
        from .reaction import describe
        pairs.append(("functional group changes", describe(rec.change)))
    pairs.append(("quality", rec.quality))
    return CorpusEntry(format=kind, text=render_pairs(pairs, kind),
                       source_id=rec.source_id or rec.rxn_smiles)


# ---------------------------------------------------------------------
# Stream stages

def dedupe(records, stats=None):
    """Drop exact duplicates; first occurrence wins.

    Molecules are keyed by canonical SMILES, reactions by the canonical
    reaction key (sorted canonical fragments per side, maps ignored).
    """
    seen = set()
    for rec in records:
        if isinstance(rec, MoleculeRecord):
            if rec.canonical is None:
                rec.canonical = write_canonical(parse_smiles(rec.smiles))
            key = ("mol", rec.canonical)
        else:
            key = ("rxn", canonical_reaction_key(rec.rxn_smiles))
        if key in seen:
            if stats is not None:
                stats["deduped"] = stats.get("deduped", 0) + 1
            continue
        seen.add(key)
        yield rec


def exclusion_filter(records, blacklist, stats=None):
    """Drop reactions whose any product canonicalizes into the blacklist
    of canonical product SMILES."""
    for rec in records:
        dropped = False
        if isinstance(rec, ReactionRecord):
            product_part = rec.rxn_smiles.strip().split(">")[2]
            for frag in product_part.split("."):
                if frag and write_canonical(parse_smiles(frag)) in blacklist:
                    dropped = True
                    break
        if dropped:
            if stats is not None:
                stats["excluded"] = stats.get("excluded", 0) + 1
            continue
        yield rec


def load_blacklist(path) -> set:
    """Blacklist file (one SMILES per line) canonicalized at load."""
    out = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.add(write_canonical(parse_smiles(line)))
    return out


def augment_reaction(rec: ReactionRecord, factor: int,
                     seed: int) -> ReactionRecord:
    """Fill ``rec.augmentations`` with ``factor`` renderings (the
    original first), all canonically equal, atom maps preserved."""
    if factor < 1:
        raise ValueError("factor must be >= 1")
    if rec.quality != "ok":
        raise ValueError("only quality=ok reactions can be augmented")
    rxn = rec.reaction or parse_reaction(rec.rxn_smiles)
    rng = random.Random(f"{seed}:{rec.rxn_smiles}")
    renderings = [rec.rxn_smiles.strip()]
    seen = set(renderings)
    attempts = 0
    while len(renderings) < factor and attempts < factor * 8:
        attempts += 1
        sides = []
        for side in (rxn.reactants, rxn.reagents, rxn.products):
            sides.append(".".join(random_render(m, rng, include_maps=True)
                                  for m in side))
        rendering = ">".join(sides)
        if rendering not in seen:
            seen.add(rendering)
            renderings.append(rendering)
    while len(renderings) < factor:   # tiny molecules: repeat renderings
        renderings.append(renderings[len(renderings) % len(seen)])
    rec.augmentations = renderings
    return rec


def plan_mix(available: dict, ratio_spec, seed: int) -> MixPlan:
    """Largest feasible quotas proportional to the ratio weights.

    Each quota stays within one entry of the exact real-valued share and
    never exceeds availability.
    """
    if not ratio_spec:
        raise ValueError("ratio_spec must name at least one source")
    for source, weight in ratio_spec:
        if weight <= 0:
            raise ValueError(f"weight for {source!r} must be positive")
        if available.get(source, 0) <= 0:
            raise ValueError(f"required source {source!r} has zero "
                             f"availability")
    scale = min(available[s] / w for s, w in ratio_spec)
    quotas = {}
    for source, weight in ratio_spec:
        exact = scale * weight
        quota = math.floor(exact)
        if quota < exact and quota + 1 <= available[source]:
            quota += 1
        quotas[source] = quota
    return MixPlan(quotas=quotas, seed=seed)


def apply_mix(entries_by_source: dict, plan: MixPlan) -> list:
    """Seeded subsample of entries according to the plan's quotas,
    re-sequenced to the original order inside each source."""
    rng = random.Random(f"{plan.seed}:mix")
    out = []
    for source in sorted(entries_by_source):
        entries = entries_by_source[source]
        quota = plan.quotas.get(source, len(entries))
        if quota >= len(entries):
            out.extend(entries)
            continue
        picked = sorted(rng.sample(range(len(entries)), quota))
        out.extend(entries[i] for i in picked)
    return out


def load_molecule_records(path):
    """Molecule file: one SMILES per line, optional tab-separated JSON
    holding "names", "description", and property key/value pairs."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            smiles, _, extra = line.partition("\t")
            names, description, properties = {}, None, {}
            if extra.strip():
                raw = json.loads(extra)
                names = raw.pop("names", {})
                description = raw.pop("description", None)
                properties = {k: str(v) for k, v in raw.items()}
            yield MoleculeRecord(smiles=smiles.strip(), names=names,
                                 description=description,
                                 properties=properties,
                                 source_id=f"molecules:{lineno}")


def load_reaction_records(path):
    """Reaction file: one atom-mapped reaction SMILES per line."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            yield ReactionRecord(rxn_smiles=line,
                                 source_id=f"reactions:{lineno}")


def build_corpus(config: dict, catalog=None):
    """Run the full pipeline per the config mapping and return
    (corpus entries, stats report).

    Config keys: seed (required), molecules, reactions, blacklist,
    formats, augment, mix.
    """
    from .catalog import default_catalog, perceive
    from .reaction import fg_changes

    if "seed" not in config:
        raise ValueError("config must set an explicit seed")
    seed = int(config["seed"])
    formats = list(config.get("formats", FORMATS))
    for kind in formats:
        if kind not in FORMATS:
            raise ValueError(f"unknown format {kind!r}")
    factor = int(config.get("augment", 1))
    catalog = catalog or default_catalog()
    counters = {}
    fmt_rng = random.Random(f"{seed}:formats")

    mol_entries = []
    fg_annotations = []
    if config.get("molecules"):
        records = []
        counters["molecules_in"] = 0
        counters["molecules_parse_errors"] = 0
        for rec in load_molecule_records(config["molecules"]):
            counters["molecules_in"] += 1
            try:
                mol = parse_smiles(rec.smiles)
                rec.canonical = write_canonical(mol)
                rec.fg_annotation = perceive(mol, catalog)
            except SmilesError:
                counters["molecules_parse_errors"] += 1
                continue
            records.append(rec)
        counters["molecules_deduped"] = 0
        stage = {"deduped": 0}
        records = list(dedupe(records, stage))
        counters["molecules_deduped"] = stage["deduped"]
        counters["molecules_out"] = len(records)
        for rec in records:
            fg_annotations.append(rec.fg_annotation)
            kind = fmt_rng.choice(formats)
            mol_entries.append(format_molecule_entry(rec, kind, seed))

    rxn_entries = []
    if config.get("reactions"):
        blacklist = set()
        if config.get("blacklist"):
            blacklist = load_blacklist(config["blacklist"])
        records = []
        counters["reactions_in"] = 0
        counters["reactions_parse_errors"] = 0
        for rec in load_reaction_records(config["reactions"]):
            counters["reactions_in"] += 1
            try:
                rec.reaction = parse_reaction(rec.rxn_smiles)
                rec.quality = rec.reaction.quality
            except ReactionError:
                counters["reactions_parse_errors"] += 1
                continue
            records.append(rec)
        stage = {"deduped": 0, "excluded": 0}
        records = list(dedupe(records, stage))
        records = list(exclusion_filter(records, blacklist, stage))
        counters["reactions_deduped"] = stage["deduped"]
        counters["reactions_excluded"] = stage["excluded"]
        counters["reactions_out"] = len(records)
        for rec in records:
            try:
                rec.change = fg_changes(rec.reaction, catalog)
            except ReactionError:
                rec.quality = "unannotated-error"
            if rec.quality == "ok" and factor > 1:
                augment_reaction(rec, factor, seed)
            else:
                rec.augmentations = [rec.rxn_smiles]
            kind = fmt_rng.choice(formats)
            for rendering in rec.augmentations:
                rxn_entries.append(
                    format_reaction_entry(rec, rendering, kind, seed))

    entries = mol_entries + rxn_entries
    if config.get("mix"):
        weights = config["mix"]
        by_source = {"molecules": mol_entries, "reactions": rxn_entries}
        available = {k: len(v) for k, v in by_source.items()}
        plan = plan_mix(available, sorted(weights.items()), seed)
        entries = apply_mix(by_source, plan)
        counters["mix_quotas"] = dict(sorted(plan.quotas.items()))

    stats = corpus_stats(entries, fg_annotations, counters)
    return entries, stats


_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


def approx_token_count(text: str) -> int:
    """Whitespace-plus-punctuation token count; approximate by design."""
    return len(_TOKEN_RE.findall(text))


def corpus_stats(entries, fg_annotations=None, counters=None) -> dict:
    """Entry counts per format and source kind, the functional-group
    histogram, and stage counters, as one JSON-ready report."""
    by_format = {}
    by_source = {}
    tokens = 0
    total = 0
    for entry in entries:
        total += 1
        by_format[entry.format] = by_format.get(entry.format, 0) + 1
        kind = entry.source_id.split(":", 1)[0] if ":" in entry.source_id \
            else "other"
        by_source[kind] = by_source.get(kind, 0) + 1
        tokens += approx_token_count(entry.text)
    report = {
        "entries": {
            "total": total,
            "by_format": dict(sorted(by_format.items())),
            "by_source": dict(sorted(by_source.items())),
        },
        "approx_tokens": tokens,
        "functional_groups": fg_histogram(fg_annotations or []),
        "counters": dict(sorted((counters or {}).items())),
    }
    return report
