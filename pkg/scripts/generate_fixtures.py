"""Build the golden fixtures under tests/fixtures/.

Molecule labels come from the brute-force matcher oracle and reaction
labels from the bond-diff oracle (tests/oracles.py), so the fixtures
stay independent of the production matcher.  Re-run after editing the
catalog or the golden inputs; outputs are committed.
"""

import json
import pathlib
import random
import sys
import zlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))
sys.path.insert(0, str(ROOT / "src"))

from oracles import oracle_changeset, oracle_perceive  # noqa: E402
from molgen import molecule_corpus  # noqa: E402
from fgkit.catalog import load_catalog  # noqa: E402
from fgkit.canon import enumerate_random, write_canonical  # noqa: E402
from fgkit.mol import parse_smiles  # noqa: E402
from fgkit.reaction import parse_reaction  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"

GOLDEN_MOLECULES = [
    # drug-like and classic ring systems
    "CC(=O)Oc1ccccc1C(=O)O", "CC(=O)Nc1ccc(O)cc1",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O", "CCOC(=O)c1ccc(N)cc1",
    "CN1CCCC1c1cccnc1", "Oc1ccccc1", "Nc1ccccc1", "NC(=O)c1ccccc1",
    "O=Cc1ccccc1", "C=Cc1ccccc1", "Cc1ccccc1", "COc1cc(C=O)ccc1O",
    "O=Cc1ccccc1O", "c1ccc2ncccc2c1", "c1ccc2[nH]ccc2c1",
    "c1ccc2ccccc2c1", "c1ccncc1", "c1cc[nH]c1", "c1ccoc1", "c1ccsc1",
    "c1c[nH]cn1", "C1CCOC1", "C1COCCO1", "C1COCCN1", "C1CCNCC1",
    # amino acids and small acids
    "NCC(=O)O", "CC(N)C(=O)O", "OCC(N)C(=O)O", "SCC(N)C(=O)O",
    "CC(O)C(=O)O", "CC(=O)C(=O)O", "OC(=O)Cc1ccccc1",
    "OC(C(=O)O)c1ccccc1", "C=CC(=O)O",
    # carbonyl family
    "CC(C)=O", "CN(C)C=O", "CC(=O)c1ccccc1", "O=CC=Cc1ccccc1",
    "O=C(c1ccccc1)c1ccccc1", "C=CC=O", "CC(=O)C=C",
    # esters, anhydrides, carbonates, carbamates
    "CCOC(C)=O", "CC(=O)OC(C)=O", "COC(=O)OC", "COC(=O)c1ccccc1",
    "CCOC(N)=O", "CC(C)(C)OC(N)=O", "CCOC(=O)CC(=O)OCC",
    # amines and ammonium
    "C[N+](C)(C)C", "OCC[N+](C)(C)C",
    "[O-]C(=O)C[N+](C)(C)C", "CCN(CC)CC", "CN(C)c1ccncc1",
    # amides, ureas, imides
    "CC(N)=O", "CNC(C)=O", "NC(N)=O", "NC(N)=S", "NC(N)=N",
    "O=C1CCC(=O)N1", "O=C1C=CC(=O)N1", "CC(=O)NN",
    # nitrogen oxidation states
    "O=[N+]([O-])c1ccccc1", "C[N+](=O)[O-]", "N#Cc1ccccc1", "CC#N",
    "N#CCC#N", "CC=NO", "CC(C)=NO", "CCN=[N+]=[N-]",
    "[N-]=[N+]=Nc1ccccc1", "NNc1ccccc1", "c1ccc(cc1)N=Nc1ccccc1",
    # oxygen chains
    "COc1ccccc1", "COc1ccccc1OC", "C1Oc2ccccc2O1",
    "Oc1ccccc1O", "Oc1cccc(O)c1", "OCC(O)CO", "OCc1ccccc1",
    "COC=C", "OCC#C", "ClCC1CO1", "OCC1CO1",
    # sulfur family
    "CSc1ccccc1", "CCSSCC", "CS(C)=O", "OS(=O)(=O)c1ccccc1",
    "NS(=O)(=O)c1ccc(N)cc1", "CS(=O)(=O)Cl", "COS(C)(=O)=O",
    "COS(=O)(=O)OC",
    # halogens, silicon, phosphorus, boron
    "ClCc1ccccc1", "C[Si](C)(C)OCC", "COP(=O)(OC)OC",
    "c1ccc(cc1)P(c1ccccc1)c1ccccc1", "CC(=O)Cl", "O=C(Cl)c1ccccc1",
    "O=C=Nc1ccccc1", "S=C=Nc1ccccc1", "OB(O)c1ccccc1",
]

GOLDEN_REACTIONS = [
    # esterifications, hydrolyses, acyl substitutions
    "[CH3:1][OH:2].[CH3:90][C:3](=[O:4])O>>[CH3:90][C:3](=[O:4])[O:2][CH3:1]",
    "[CH3:90][C:3](=[O:4])[O:2][CH3:1].[OH2:5]>>[CH3:90][C:3](=[O:4])[OH:5].[CH3:1][OH:2]",
    "[CH3:1][C:2](=[O:3])O.[NH2:4][CH2:5][CH3:6]>>[CH3:1][C:2](=[O:3])[NH:4][CH2:5][CH3:6]",
    "[CH3:1][C:2](=[O:3])Cl.[NH:4]([CH3:5])[CH3:6]>>[CH3:1][C:2](=[O:3])[N:4]([CH3:5])[CH3:6]",
    "[CH3:1][C:2](=[O:3])Cl.[OH:4][CH2:5][CH3:6]>>[CH3:1][C:2](=[O:3])[O:4][CH2:5][CH3:6]",
    "[CH3:1][S:2](=[O:3])(=[O:4])Cl.[NH2:5][CH2:6][CH3:7]>>[CH3:1][S:2](=[O:3])(=[O:4])[NH:5][CH2:6][CH3:7]",
    "[CH3:1][C:2](=[O:3])[O:4][C:5](=[O:6])[CH3:7].[NH2:8][CH3:9]>>[CH3:1][C:2](=[O:3])[NH:8][CH3:9].[OH:4][C:5](=[O:6])[CH3:7]",
    "[CH3:1][C:2](=[O:3])[O:4][CH3:5].[OH:6][CH2:7][CH3:8]>>[CH3:1][C:2](=[O:3])[O:6][CH2:7][CH3:8].[CH3:5][OH:4]",
    "[CH3:90][C:1]([CH3:91])([CH3:92])[O:2][C:3](=[O:4])[NH:5][CH2:6][CH3:7]>>[NH2:5][CH2:6][CH3:7]",
    "[CH3:1][N:2]=[C:3]=[O:4].[OH:5][CH3:6]>>[CH3:1][NH:2][C:3](=[O:4])[O:5][CH3:6]",
    "[CH3:1][N:2]=[C:3]=[O:4].[NH2:5][CH3:6]>>[CH3:1][NH:2][C:3](=[O:4])[NH:5][CH3:6]",
    # oxidation-state changes
    "[O:1]=[N+:2]([O-:3])[c:4]1[cH:5][cH:6][cH:7][cH:8][cH:9]1>>[NH2:2][c:4]1[cH:5][cH:6][cH:7][cH:8][cH:9]1",
    "[CH3:1][C:2](=[O:3])[CH3:4]>>[CH3:1][CH:2]([OH:3])[CH3:4]",
    "[CH3:1][CH2:2][OH:3]>>[CH3:1][CH:2]=[O:3]",
    "[CH3:1][CH:2]=[O:3].[OH2:4]>>[CH3:1][C:2](=[O:3])[OH:4]",
    "[CH3:1][C:2]#[N:3]>>[CH3:1][CH2:2][NH2:3]",
    "[CH3:1][C:2]#[N:3].[OH2:4]>>[CH3:1][C:2](=[O:4])[NH2:3]",
    "[CH3:1][C:2](=[O:3])[O:4][CH3:5]>>[CH3:1][CH2:2][OH:3].[CH3:5][OH:4]",
    "[CH3:1][S:2][CH3:3].[OH2:4]>>[CH3:1][S:2](=[O:4])[CH3:3]",
    "[CH3:1][CH2:2][N:3]=[N+:4]=[N-:5]>>[CH3:1][CH2:2][NH2:3]",
    # condensations
    "[CH3:1][C:2](=[O:3])[CH3:4].[NH2:5][CH3:6]>>[CH3:1][C:2](=[N:5][CH3:6])[CH3:4]",
    "[CH3:1][C:2](=[O:3])[CH3:4].[NH2:5][CH3:6]>>[CH3:1][CH:2]([NH:5][CH3:6])[CH3:4]",
    "[CH3:1][C:2](=[O:3])[CH3:4].[NH2:5][OH:6]>>[CH3:1][C:2](=[N:5][OH:6])[CH3:4]",
    "[CH3:1][C:2](=[O:3])[CH3:4].[NH2:5][NH2:6]>>[CH3:1][C:2](=[N:5][NH2:6])[CH3:4]",
    "[CH3:1][C:2](=[O:3])[CH3:4].[CH3:5][CH:6]=[O:7]>>[CH3:1][C:2](=[O:3])[CH:4]=[CH:6][CH3:5]",
    "[CH3:1][CH:2]=[O:3].[OH:4][CH3:5].[OH:6][CH3:7]>>[CH3:1][CH:2]([O:4][CH3:5])[O:6][CH3:7]",
    "[CH3:1][CH:2]([O:4][CH3:5])[O:6][CH3:7].[OH2:3]>>[CH3:1][CH:2]=[O:3].[OH:4][CH3:5].[OH:6][CH3:7]",
    # substitutions
    "[CH3:1][O-:2].[CH3:3][CH2:4]Br>>[CH3:1][O:2][CH2:4][CH3:3]",
    "[CH3:1][CH2:2]Br.[NH2:3][CH3:4]>>[CH3:1][CH2:2][NH:3][CH3:4]",
    "[CH3:1][SH:2].[CH3:3][CH2:4]I>>[CH3:1][S:2][CH2:4][CH3:3]",
    "[CH3:1][SH:2].[SH:3][CH3:4]>>[CH3:1][S:2][S:3][CH3:4]",
    "[CH3:1][CH2:2][Cl:4].[I-:3]>>[CH3:1][CH2:2][I:3].[Cl-:4]",
    "[CH3:1][CH2:2]Br.[N-:3]=[N+:4]=[N-:5]>>[CH3:1][CH2:2][N:3]=[N+:4]=[N-:5]",
    "[CH3:1][O:2][CH2:3][CH3:4].[BrH:5]>>[CH3:1][OH:2].[CH2:3]([CH3:4])[Br:5]",
    # additions and eliminations
    "[CH2:1]=[CH:2][CH3:3]>>[CH3:1][CH2:2][CH3:3]",
    "[CH:1]#[C:2][CH3:3]>>[CH2:1]=[CH:2][CH3:3]",
    "[CH2:1]=[CH:2][CH3:3].[Br:4][Br:5]>>[CH2:1]([Br:4])[CH:2]([Br:5])[CH3:3]",
    "[CH2:1]=[CH:2][CH3:3].[BrH:4]>>[CH3:1][CH:2]([Br:4])[CH3:3]",
    "[CH3:1][CH:2]([OH:3])[CH3:4]>>[CH2:1]=[CH:2][CH3:4]",
    "[CH3:1][Mg]Br.[CH3:2][C:3](=[O:4])[CH3:5]>>[CH3:2][C:3]([CH3:1])([OH:4])[CH3:5]",
    "[CH3:1][P+]([CH3:90])([CH3:91])[CH2-:2].[CH3:3][CH:4]=[O:5]>>[CH2:2]=[CH:4][CH3:3]",
    # ring forming and breaking
    "[CH2:1]1[CH2:2][O:3]1.[OH2:4]>>[OH:4][CH2:1][CH2:2][OH:3]",
    "[OH:1][CH2:2][CH2:3]Br>>[O:1]1[CH2:2][CH2:3]1",
    "[OH:1][CH2:2][CH2:3][CH2:4][C:5](=[O:6])[OH:7]>>[O:1]1[CH2:2][CH2:3][CH2:4][C:5]1=[O:6]",
    "[NH2:1][CH2:2][CH2:3][CH2:4][C:5](=[O:6])[OH:7]>>[NH:1]1[CH2:2][CH2:3][CH2:4][C:5]1=[O:6]",
    "[CH2:1]=[CH:2][CH:3]=[CH2:4].[CH2:5]=[CH2:6]>>[CH2:1]1[CH:2]=[CH:3][CH2:4][CH2:6][CH2:5]1",
    # aromatic chemistry
    "[CH3:1][C:2](=[O:3])Cl.[cH:4]1[cH:5][cH:6][cH:7][cH:8][cH:9]1>>[CH3:1][C:2](=[O:3])[c:4]1[cH:5][cH:6][cH:7][cH:8][cH:9]1",
    "[CH3:90][c:1]1[cH:2][cH:3][c:4](B(O)O)[cH:5][cH:6]1.Br[c:7]1[cH:8][cH:9][cH:10][cH:11][cH:12]1>>[CH3:90][c:1]1[cH:2][cH:3][c:4](-[c:7]2[cH:8][cH:9][cH:10][cH:11][cH:12]2)[cH:5][cH:6]1",
    "[cH:1]1[cH:2][cH:3][cH:4][cH:5][cH:6]1.O[N+:7](=[O:8])[O-:9]>>[c:1]1([N+:7](=[O:8])[O-:9])[cH:2][cH:3][cH:4][cH:5][cH:6]1",
    "[SH:1][CH2:2][CH2:3][CH2:4]Br>>[S:1]1[CH2:2][CH2:3][CH2:4]1",
]


def spectator_variant(rxn):
    """A structurally distinct variant: one spectator hydrogen becomes a
    methyl on both sides (map 89 reserved for the new carbon)."""
    import re
    for num in sorted({int(n) for n in re.findall(r"\[CH3:(\d+)\]", rxn)}):
        token = f"[CH3:{num}]"
        if rxn.count(token) >= 2:
            return rxn.replace(token, f"[CH2:{num}]([CH3:89])")
    for num in sorted({int(n) for n in re.findall(r"\[CH2:(\d+)\]", rxn)}):
        token = f"[CH2:{num}]"
        if rxn.count(token) >= 2:
            return rxn.replace(token, f"[CH:{num}]([CH3:89])")
    for num in sorted({int(n) for n in re.findall(r"\[cH:(\d+)\]", rxn)}):
        token = f"[cH:{num}]"
        if rxn.count(token) >= 2:
            return rxn.replace(token, f"[c:{num}]([CH3:89])")
    return None


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    catalog = load_catalog()

    molecules = []
    seen = set()
    for smi in GOLDEN_MOLECULES:
        mol = parse_smiles(smi)
        canon = write_canonical(mol)
        assert canon not in seen, f"duplicate golden molecule {smi}"
        seen.add(canon)
        molecules.append({"smiles": smi,
                          "heavy_atoms": mol.heavy_atom_count(),
                          "groups": oracle_perceive(mol, catalog)})
    assert len(molecules) == 100, f"need 100 molecules, have {len(molecules)}"
    (FIXTURES / "golden_molecules.json").write_text(
        json.dumps(molecules, indent=1), encoding="utf-8")
    print(f"golden_molecules.json: {len(molecules)} entries")

    reactions = []
    for rxn_text in GOLDEN_REACTIONS:
        rxn = parse_reaction(rxn_text)
        assert rxn.quality == "ok", (rxn_text, rxn.quality)
        summary = oracle_changeset(rxn, catalog)
        reactions.append({"rxn_smiles": rxn_text, **summary})
    assert len(reactions) == 50, f"need 50 reactions, have {len(reactions)}"
    (FIXTURES / "golden_reactions.json").write_text(
        json.dumps(reactions, indent=1), encoding="utf-8")
    print(f"golden_reactions.json: {len(reactions)} entries")

    augmented = [r["rxn_smiles"] for r in reactions]
    for r in reactions:
        variant = spectator_variant(r["rxn_smiles"])
        assert variant is not None, f"no spectator methyl in {r['rxn_smiles']}"
        rxn = parse_reaction(variant)
        assert rxn.quality == "ok", (variant, rxn.quality)
        augmented.append(variant)
    assert len(augmented) == 100
    (FIXTURES / "reactions_100.smi").write_text(
        "\n".join(augmented) + "\n", encoding="utf-8")
    print(f"reactions_100.smi: {len(augmented)} reactions")

    # --- corpus build fixture: 1000 records with planted noise ---
    rng = random.Random(20240817)
    mol_lines = []
    base = molecule_corpus(4242, 775, min_heavy=3, max_heavy=12)
    for i, smi in enumerate(base):
        props = {"mw": f"{rng.uniform(40, 400):.1f}",
                 "logp": f"{rng.uniform(-2, 6):.2f}"}
        if i % 3 == 0:
            props["names"] = {"formula": f"compound-{i}"}
        mol_lines.append(smi + "\t" + json.dumps(props, sort_keys=True))
    dup_sources = rng.sample(base, 20)
    for smi in dup_sources:   # duplicates rendered differently
        alt = enumerate_random(parse_smiles(smi), 2, rng.randint(0, 9999))
        mol_lines.append(alt[-1])
    for k in range(5):
        mol_lines.append(f"this-is-not-smiles-{k}")
    assert len(mol_lines) == 800
    rng.shuffle(mol_lines)
    (FIXTURES / "corpus_molecules.smi").write_text(
        "\n".join(mol_lines) + "\n", encoding="utf-8")

    rxn_lines = list(augmented)
    for rxn_text in augmented[:60]:   # canonical duplicates via re-render
        rxn = parse_reaction(rxn_text)
        rng2 = random.Random(zlib.crc32(rxn_text.encode()))
        from fgkit.canon import random_render
        sides = []
        for side in (rxn.reactants, rxn.reagents, rxn.products):
            sides.append(".".join(random_render(m, rng2, include_maps=True)
                                  for m in side))
        rxn_lines.append(">".join(sides))
    for k in range(40):
        rxn_lines.append(augmented[k % len(augmented)])
    assert len(rxn_lines) == 200
    (FIXTURES / "corpus_reactions.smi").write_text(
        "\n".join(rxn_lines) + "\n", encoding="utf-8")

    blacklist = []
    for rxn_text in augmented[:7]:
        product = rxn_text.split(">")[2].split(".")[0]
        blacklist.append(write_canonical(parse_smiles(product)))
    (FIXTURES / "corpus_blacklist.smi").write_text(
        "\n".join(sorted(set(blacklist))) + "\n", encoding="utf-8")

    config = {
        "molecules": "tests/fixtures/corpus_molecules.smi",
        "reactions": "tests/fixtures/corpus_reactions.smi",
        "blacklist": "tests/fixtures/corpus_blacklist.smi",
        "seed": 7,
        "formats": ["markdown_list", "markdown_table", "json_dict"],
        "augment": 2,
    }
    (FIXTURES / "corpus_config.json").write_text(
        json.dumps(config, indent=2) + "\n", encoding="utf-8")
    print("corpus fixtures written")


if __name__ == "__main__":
    main()
