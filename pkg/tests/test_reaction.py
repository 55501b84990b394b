import json
import random

import pytest

from fgkit.mol import parse_smiles
from fgkit.canon import random_render
from fgkit.reaction import (ChangeSet, ReactionError, describe, fg_changes,
                            parse_reaction, reaction_centers)

ESTER = "[CH3:1][OH:2].[C:3](=[O:4])(O)[CH3:5]>>" \
        "[CH3:1][O:2][C:3](=[O:4])[CH3:5]"
EPOXIDE = "[CH2:1]1[CH2:2][O:3]1.[OH2:4]>>[OH:4][CH2:1][CH2:2][OH:3]"


def test_parse_reaction_example():
    rxn = parse_reaction(ESTER)
    assert len(rxn.reactants) == 2
    assert len(rxn.reagents) == 0
    assert len(rxn.products) == 1
    shared = set(rxn.side_map("reactants")) & set(rxn.side_map("products"))
    assert shared == {1, 2, 3, 4, 5}


def test_parse_errors():
    with pytest.raises(ReactionError, match="'>' separators"):
        parse_reaction("CC>CC")
    with pytest.raises(ReactionError):
        parse_reaction("CC>>")
    with pytest.raises(ReactionError, match="duplicate atom map"):
        parse_reaction("[CH3:1][CH3:1]>>[CH3:1][CH3:1]")
    with pytest.raises(ReactionError):
        parse_reaction("C(C>>CC")
    # unmapped reactions parse fine
    assert parse_reaction("CC>>CC").quality == "partial-mapping"


def test_reagents_allowed_and_ignored(catalog):
    rxn = parse_reaction(
        "[CH3:1][OH:2].[C:3](=[O:4])(O)[CH3:5]>OS(=O)(=O)O>"
        "[CH3:1][O:2][C:3](=[O:4])[CH3:5]")
    assert len(rxn.reagents) == 1
    change = fg_changes(rxn, catalog)
    assert change.group_name_multisets() == \
        (["alcohol", "carboxylic acid"], ["ester"])


def test_centers_esterification():
    centers = reaction_centers(parse_reaction(ESTER))
    assert centers.map_numbers == {2, 3}


def test_centers_identity_reaction():
    centers = reaction_centers(parse_reaction("[CH3:1][CH3:2]>>[CH3:1][CH3:2]"))
    assert centers.map_numbers == set()


def test_centers_epoxide():
    centers = reaction_centers(parse_reaction(EPOXIDE))
    assert centers.map_numbers == {1, 3, 4}


def test_unannotated_error():
    with pytest.raises(ReactionError, match="unannotated"):
        reaction_centers(parse_reaction("CC>>CC"))


def test_fg_changes_esterification(catalog):
    change = fg_changes(parse_reaction(ESTER), catalog)
    assert change.group_name_multisets() == \
        (["alcohol", "carboxylic acid"], ["ester"])
    assert describe(change) == \
        "Reaction between alcohol and carboxylic acid forming ester."


def test_fg_changes_identity(catalog):
    change = fg_changes(
        parse_reaction("[CH3:1][CH3:2]>>[CH3:1][CH3:2]"), catalog)
    assert change.is_empty()
    assert describe(change) == "No functional-group change detected."


def test_fg_changes_epoxide(catalog):
    change = fg_changes(parse_reaction(EPOXIDE), catalog)
    assert change.group_name_multisets()[0] == ["epoxy"]
    assert "alcohol" in change.group_name_multisets()[1]
    assert change.rings_broken == [3]
    assert "1 ring broken (size 3)" in describe(change)


def test_containment_invariant(catalog, fixtures_dir):
    golden = json.loads((fixtures_dir / "golden_reactions.json").read_text())
    for entry in golden[:20]:
        rxn = parse_reaction(entry["rxn_smiles"])
        centers = reaction_centers(rxn)
        change = fg_changes(rxn, catalog)
        for g in change.reacting_groups:
            assert any((g.molecule, a) in centers.reactant_atoms
                       for a in g.atoms)
        for g in change.resulting_groups:
            assert any((g.molecule, a) in centers.product_atoms
                       for a in g.atoms)


def test_reverse_symmetry(catalog, fixtures_dir):
    golden = json.loads((fixtures_dir / "golden_reactions.json").read_text())
    for entry in golden[:15]:
        parts = entry["rxn_smiles"].split(">")
        reverse = f"{parts[2]}>{parts[1]}>{parts[0]}"
        forward_change = fg_changes(parse_reaction(entry["rxn_smiles"]),
                                    catalog)
        try:
            reverse_change = fg_changes(parse_reaction(reverse), catalog)
        except ReactionError:
            continue   # reversed reaction may become unbalanced
        f_reacting, f_resulting = forward_change.group_name_multisets()
        r_reacting, r_resulting = reverse_change.group_name_multisets()
        assert (f_reacting, f_resulting) == (r_resulting, r_reacting)
        assert forward_change.rings_broken == reverse_change.rings_formed
        assert forward_change.rings_formed == reverse_change.rings_broken


def test_map_relabel_invariance(catalog):
    import re

    base = ESTER
    numbers = sorted({int(n) for n in re.findall(r":(\d+)\]", base)})
    relabeled = base
    mapping = {n: n + 40 for n in numbers}
    for old, new in mapping.items():
        relabeled = relabeled.replace(f":{old}]", f":{new}]")
    a = fg_changes(parse_reaction(base), catalog)
    b = fg_changes(parse_reaction(relabeled), catalog)
    assert a.group_name_multisets() == b.group_name_multisets()
    assert a.rings_broken == b.rings_broken


def test_augmentation_invariance_sample(catalog, fixtures_dir):
    lines = (fixtures_dir / "reactions_100.smi").read_text().splitlines()
    rng = random.Random(3)
    for line in lines[:10]:
        rxn = parse_reaction(line)
        base = fg_changes(rxn, catalog).group_name_multisets()
        for _ in range(3):
            sides = []
            for side in (rxn.reactants, rxn.reagents, rxn.products):
                sides.append(".".join(random_render(m, rng, include_maps=True)
                                      for m in side))
            again = parse_reaction(">".join(sides))
            assert fg_changes(again, catalog).group_name_multisets() == base


def test_quality_flags():
    assert parse_reaction(ESTER).quality == "ok"
    assert parse_reaction("[CH3:1]O>>[CH3:1]OC").quality == "partial-mapping"
    assert parse_reaction("[CH3:1]O>>[CH3:1][OH:2]").quality == "unbalanced"


def test_changeset_serialization(catalog):
    change = fg_changes(parse_reaction(EPOXIDE), catalog)
    data = change.to_dict()
    assert set(data) == {"reacting_groups", "resulting_groups",
                         "rings_broken", "rings_formed",
                         "extra_bond_changes", "quality", "description"}
    assert data["rings_broken"] == {"count": 1, "sizes": [3]}
    assert data["quality"] == "ok"


def test_describe_edge_cases():
    assert describe(ChangeSet()) == "No functional-group change detected."
    only_reacting = ChangeSet(reacting_groups=[
        type("G", (), {"name": "alkene"})()])
    assert describe(only_reacting) == "Reaction consuming alkene."
