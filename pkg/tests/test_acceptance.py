"""Acceptance suite: one test per release criterion, each printing a
pass/fail line with its runtime (run with -s to see them inline)."""

import json
import random
import time

from molgen import molecule_corpus
from oracles import brute_matches
from fgkit.canon import enumerate_random, write_canonical
from fgkit.catalog import EXPECTED_CATEGORY_COUNTS, load_catalog, perceive
from fgkit.cli import main as cli_main
from fgkit.corpus import (ReactionRecord, augment_reaction,
                          canonical_reaction_key, plan_mix)
from fgkit.mol import parse_smiles
from fgkit.reaction import fg_changes, parse_reaction
from fgkit.rewards import accuracy_reward, format_reward
from fgkit.smarts import match_all
from test_rewards import FORMAT_NEGATIVE, FORMAT_POSITIVE


class _Criterion:
    def __init__(self, name, budget_seconds):
        self.name = name
        self.budget = budget_seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        verdict = "PASS" if exc_type is None else "FAIL"
        print(f"ACCEPTANCE {self.name}: {verdict} "
              f"({elapsed:.1f}s, budget {self.budget}s)")
        if exc_type is None:
            assert elapsed < self.budget, \
                f"{self.name} exceeded runtime budget: {elapsed:.1f}s"
        return False


def test_catalog_fidelity():
    with _Criterion("catalog-fidelity", 5):
        catalog = load_catalog()
        assert len(catalog) == 241
        assert dict(catalog.category_counts()) == EXPECTED_CATEGORY_COUNTS
        for definition in catalog:
            assert match_all(definition.pattern,
                             parse_smiles(definition.positive_example)), \
                definition.name
            assert not match_all(definition.pattern,
                                 parse_smiles(definition.negative_example)), \
                definition.name


def test_molecule_annotation_accuracy(catalog, fixtures_dir):
    with _Criterion("molecule-annotation-accuracy", 10):
        golden = json.loads(
            (fixtures_dir / "golden_molecules.json").read_text())
        assert len(golden) == 100
        exact = 0
        for entry in golden:
            got = [m.to_dict()
                   for m in perceive(parse_smiles(entry["smiles"]), catalog)]
            if got == entry["groups"]:
                exact += 1
        print(f"  molecule annotation: {exact}/100 exact")
        assert exact >= 90


def test_reaction_annotation_accuracy(catalog, fixtures_dir):
    with _Criterion("reaction-annotation-accuracy", 10):
        golden = json.loads(
            (fixtures_dir / "golden_reactions.json").read_text())
        assert len(golden) == 50
        exact = 0
        for entry in golden:
            change = fg_changes(parse_reaction(entry["rxn_smiles"]), catalog)
            reacting, resulting = change.group_name_multisets()
            if (reacting == entry["reacting"]
                    and resulting == entry["resulting"]
                    and change.rings_broken == entry["rings_broken"]
                    and change.rings_formed == entry["rings_formed"]):
                exact += 1
        print(f"  reaction annotation: {exact}/50 exact")
        assert exact / 50 >= 0.80


def test_matcher_oracle_equivalence(catalog, fixtures_dir):
    with _Criterion("matcher-oracle-equivalence", 300):
        golden = json.loads(
            (fixtures_dir / "golden_molecules.json").read_text())
        molecules = [m["smiles"] for m in golden if m["heavy_atoms"] <= 12]
        assert len(molecules) >= 50
        pairs = 0
        for smiles in molecules:
            mol = parse_smiles(smiles)
            for definition in catalog:
                engine = {r.atoms
                          for r in match_all(definition.pattern, mol)}
                oracle = brute_matches(definition.pattern, mol)
                assert engine == oracle, (definition.name, smiles)
                pairs += 1
        print(f"  matcher equivalence over {pairs} pattern-molecule pairs")


def test_canonicalization_properties():
    with _Criterion("canonicalization-properties", 120):
        failures = 0
        rng = random.Random(2718)
        for smiles in molecule_corpus(31415, 10000):
            mol = parse_smiles(smiles)
            canonical = write_canonical(mol)
            if write_canonical(parse_smiles(canonical)) != canonical:
                failures += 1
                continue
            for rendering in enumerate_random(mol, 2, rng.randint(0, 10**6)):
                if write_canonical(parse_smiles(rendering)) != canonical:
                    failures += 1
        print(f"  canonicalization over 10000 molecules, "
              f"{failures} failures")
        assert failures == 0


def test_augmentation(catalog, fixtures_dir):
    with _Criterion("augmentation", 60):
        lines = (fixtures_dir / "reactions_100.smi").read_text().splitlines()
        assert len(lines) == 100
        for line in lines:
            record = ReactionRecord(rxn_smiles=line)
            record.reaction = parse_reaction(line)
            augment_reaction(record, 10, 11)
            assert len(record.augmentations) == 10
            key = canonical_reaction_key(line)
            base = fg_changes(record.reaction, catalog) \
                .group_name_multisets()
            for rendering in record.augmentations:
                assert canonical_reaction_key(rendering) == key
                again = fg_changes(parse_reaction(rendering), catalog)
                assert again.group_name_multisets() == base


def test_mix_planner():
    with _Criterion("mix-planner", 60):
        plan = plan_mix({"chem": 1000, "general": 10000},
                        [("chem", 1), ("general", 2)], seed=0)
        assert plan.quotas == {"chem": 1000, "general": 2000}

        rng = random.Random(55)
        specs = [[("chem", 1), ("general", 2)],
                 [("it", 70), ("pseudo", 22), ("teacher", 8)]]
        for trial in range(1000):
            spec = specs[trial % 2]
            available = {s: rng.randint(1, 50000) for s, _ in spec}
            plan = plan_mix(available, spec, seed=trial)
            scale = min(available[s] / w for s, w in spec)
            for source, weight in spec:
                assert plan.quotas[source] <= available[source]
                assert abs(plan.quotas[source] - scale * weight) <= 1


def test_reward_invariance():
    with _Criterion("reward-invariance", 60):
        gold_mol = parse_smiles("CC(=O)Oc1ccccc1C(=O)O")
        gold = write_canonical(gold_mol)
        for rendering in enumerate_random(gold_mol, 25, 9):
            assert accuracy_reward(rendering, gold, "smiles") == 1.0
        decoys = []
        for smiles in molecule_corpus(777, 400):
            canonical = write_canonical(parse_smiles(smiles))
            if canonical != gold and canonical not in decoys:
                decoys.append(canonical)
            if len(decoys) == 100:
                break
        assert len(decoys) == 100
        for decoy in decoys:
            assert accuracy_reward(decoy, gold, "smiles") == 0.0
        assert len(FORMAT_POSITIVE) + len(FORMAT_NEGATIVE) == 30
        for response in FORMAT_POSITIVE:
            assert format_reward(response) == 1.0
        for response in FORMAT_NEGATIVE:
            assert format_reward(response) == 0.0


def test_pipeline_determinism_and_conservation(tmp_path, fixtures_dir):
    with _Criterion("pipeline-determinism-and-conservation", 240):
        config = json.loads(
            (fixtures_dir / "corpus_config.json").read_text())
        config["molecules"] = str(fixtures_dir / "corpus_molecules.smi")
        config["reactions"] = str(fixtures_dir / "corpus_reactions.smi")
        config["blacklist"] = str(fixtures_dir / "corpus_blacklist.smi")
        outputs = []
        for run in ("a", "b"):
            corpus_path = tmp_path / f"corpus_{run}.jsonl"
            stats_path = tmp_path / f"stats_{run}.json"
            config["output"] = str(corpus_path)
            config["stats"] = str(stats_path)
            config_path = tmp_path / f"config_{run}.json"
            config_path.write_text(json.dumps(config))
            assert cli_main(["build-corpus", "--config",
                             str(config_path)]) == 0
            outputs.append((corpus_path.read_bytes(),
                            stats_path.read_bytes()))
        assert outputs[0] == outputs[1], "corpus build is not byte-stable"

        stats = json.loads(outputs[0][1])
        counters = stats["counters"]
        assert counters["molecules_in"] == (
            counters["molecules_out"] + counters["molecules_parse_errors"]
            + counters["molecules_deduped"])
        assert counters["reactions_in"] == (
            counters["reactions_out"] + counters["reactions_parse_errors"]
            + counters["reactions_deduped"]
            + counters["reactions_excluded"])
        assert counters["molecules_in"] + counters["reactions_in"] == 1000
        print(f"  counters: {counters}")
