# Functional-group perception with the bundled 241-group catalog.

from fgkit.catalog import default_catalog, fg_histogram, perceive
from fgkit.mol import parse_smiles
from fgkit.smarts import match_all, parse_smarts

catalog = default_catalog()
print("catalog size:", len(catalog))
print("category sizes:", dict(catalog.category_counts()))

# Perception reports each located instance with its atom indices.
# Nested fragments are shadowed: the carbamate ester below does NOT
# also report its amide/ester/ether pieces.
for smiles in ["CCO", "CC(=O)O", "NC(=O)OC", "CC(=O)Oc1ccccc1C(=O)O",
               "NS(=O)(=O)c1ccc(N)cc1"]:
    matches = perceive(parse_smiles(smiles), catalog)
    print(f"{smiles:26s} -> {[(m.group_name, m.atoms) for m in matches]}")

# Histograms aggregate perception over a stream of molecules.
stream = [perceive(parse_smiles(s), catalog)
          for s in ["CCO", "CCN", "CC(=O)O", "CCO"]]
print("histogram:", fg_histogram(stream))

# The SMARTS engine underneath is usable directly.
pattern = parse_smarts("[CX3](=O)[OX2H1]")
hits = match_all(pattern, parse_smiles("OC(=O)CCC(=O)O"))
print("carboxylic acid embeddings:", [h.atom_list() for h in hits])
