# Parsing SMILES into molecular graphs and writing canonical or
# randomized renderings.

from fgkit import parse_smiles, write_canonical, enumerate_random, ring_info

# Any rendering of a molecule parses to the same graph; the canonical
# writer collapses them to one string.
for smiles in ["CCO", "OCC", "C(O)C"]:
    print(f"{smiles:6s} -> {write_canonical(parse_smiles(smiles))}")

# Kekule and aromatic notations unify, and atom maps never change
# identity.
print(write_canonical(parse_smiles("C1=CC=CC=C1")),
      "==", write_canonical(parse_smiles("c1ccccc1")))
print(write_canonical(parse_smiles("[CH3:5]O")),
      "==", write_canonical(parse_smiles("CO")))

# Atom attributes live on the graph.
aspirin = parse_smiles("CC(=O)Oc1ccccc1C(=O)O")
print("atoms:", len(aspirin.atoms), "bonds:", len(aspirin.bonds),
      "rings:", [len(r) for r in ring_info(aspirin)])
print("aromatic atoms:", sum(a.aromatic for a in aspirin.atoms))
print("total hydrogens:", sum(a.total_h for a in aspirin.atoms))

# Seeded random renderings drive data augmentation; every one of them
# canonicalizes back to the same string.
canonical = write_canonical(aspirin)
for rendering in enumerate_random(aspirin, 5, seed=42):
    assert write_canonical(parse_smiles(rendering)) == canonical
    print("rendering:", rendering)
