import pytest

from oracles import brute_matches
from fgkit.mol import parse_smiles
from fgkit.smarts import SmartsError, has_match, match_all, parse_smarts


def sets(pattern, smiles):
    return [r.atom_list()
            for r in match_all(parse_smarts(pattern), parse_smiles(smiles))]


def test_parse_structure():
    p = parse_smarts("[OX2H]")
    assert len(p.nodes) == 1 and not p.edges
    p = parse_smarts("[CX3](=O)[OX2H1]")
    assert len(p.nodes) == 3
    orders = sorted(expr[1] for _, _, expr in p.edges if expr)
    assert orders == [2]
    p = parse_smarts("[NX3;!$(N=O)]")
    assert p.nodes[0][0] == "and"


def test_reparse_stability():
    for source in ["[CX3](=O)[OX2H1]", "[F,Cl,Br,I]", "c1ccccc1",
                   "[NX3;!$([NX3][CX3]=[OX1])]([#6])[#6]"]:
        a = parse_smarts(source)
        b = parse_smarts(source)
        assert a.nodes == b.nodes
        assert a.edges == b.edges


def test_match_examples():
    assert sets("[OX2H]", "CCO") == [[2]]
    assert sets("[CX3](=O)[OX2H1]", "CC(=O)O") == [[1, 2, 3]]
    assert sets("c", "CCO") == []
    assert has_match(parse_smarts("[OX2H]"), parse_smiles("CCO"))
    assert not has_match(parse_smarts("[F]"), parse_smiles("CCO"))


def test_dedup_by_atom_set():
    # benzene embeds a 6-ring pattern 12 ways onto one atom set
    assert sets("c1ccccc1", "c1ccccc1") == [[0, 1, 2, 3, 4, 5]]


def test_default_bond_is_single_or_aromatic():
    assert sets("CC", "C=C") == []
    assert sets("cc", "c1ccccc1") != []
    assert sets("C=C", "C=C") == [[0, 1]]


def test_ring_primitives():
    assert sets("[R]", "C1CC1C") == [[0], [1], [2]]
    assert sets("[R0]", "C1CC1C") == [[3]]
    assert sets("[R2]", "c1ccc2ccccc2c1") == [[3], [8]]
    assert sets("[r6]", "C1CC1") == []
    assert sets("[CX4;r3]", "C1CC1") == [[0], [1], [2]]
    assert sets("*@*", "C1CC1C")[0] == [0, 1]
    assert [0, 3] not in sets("*@*", "C1CC1C")


def test_charge_and_wildcards():
    assert sets("[O-]", "CC(=O)[O-]") == [[3]]
    assert sets("[N+]", "C[N+](C)(C)C") == [[1]]
    assert sets("[!C]", "CCO") == [[2]]
    assert sets("[a]", "Cc1ccccc1") == [[i] for i in range(1, 7)]
    assert sets("[A]", "Cc1ccccc1") == [[0]]


def test_recursive_patterns():
    assert sets("[NX3;!$(N=O)]", "CNC") == [[1]]
    assert sets("[$([OX2H][CX4])]", "CCO.CC(=O)O") == [[2]]
    assert sets("[CX4;$(C[OX2H])]", "CCO") == [[1]]


def test_disconnected_pattern():
    assert sets("[Li+].[C-]", "[Li+].[CH2-]C") == [[0, 1]]
    assert sets("O.O", "OCCO") == [[0, 3]]
    assert sets("O.O", "OCC") == []


def test_unsupported_primitives_are_named_errors():
    with pytest.raises(SmartsError, match="isotope"):
        parse_smarts("[13C]")
    with pytest.raises(SmartsError, match="chirality"):
        parse_smarts("[C@H]")
    with pytest.raises(SmartsError):
        parse_smarts("[CX3](=O")
    with pytest.raises(SmartsError):
        parse_smarts("")


def test_negation_soundness_on_single_atoms():
    primitives = ["C", "c", "N", "O", "#6", "X4", "H1", "R", "+"]
    molecules = ["C", "N", "O", "[NH4+]", "[CH3-]"]
    for prim in primitives:
        pos = parse_smarts(f"[{prim}]")
        neg = parse_smarts(f"[!{prim}]")
        for smi in molecules:
            mol = parse_smiles(smi)
            assert has_match(pos, mol) != has_match(neg, mol)


def test_has_match_consistency(catalog):
    molecules = ["CCO", "CC(=O)OC", "c1ccncc1", "CS(=O)(=O)N",
                 "CC(C)=NO", "COP(=O)(OC)OC"]
    for definition in list(catalog)[::13]:
        for smi in molecules:
            mol = parse_smiles(smi)
            assert has_match(definition.pattern, mol) == \
                bool(match_all(definition.pattern, mol))


def test_determinism():
    pattern = parse_smarts("[#6]~[#6]")
    mol = parse_smiles("CC(C)Cc1ccc(cc1)C(C)C(=O)O")
    first = [r.atom_list() for r in match_all(pattern, mol)]
    for _ in range(3):
        assert [r.atom_list() for r in match_all(pattern, mol)] == first


def test_oracle_equivalence_sample(catalog):
    molecules = ["CCO", "CC(=O)O", "NC(=O)OC", "c1ccc2[nH]ccc2c1",
                 "CS(C)=O", "CO[N+](=O)[O-]", "C1CO1", "CSSC",
                 "C[Si](C)(C)OC=C", "CC(C)(C)OC(N)=O"]
    for smi in molecules:
        mol = parse_smiles(smi)
        for definition in catalog:
            engine = {r.atoms for r in match_all(definition.pattern, mol)}
            assert engine == brute_matches(definition.pattern, mol), \
                (definition.name, smi)
