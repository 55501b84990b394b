# The corpus pipeline: formatting, dedup, leakage exclusion,
# augmentation, and mix planning.

import json
import pathlib
import tempfile

from fgkit.catalog import default_catalog, perceive
from fgkit.corpus import (MoleculeRecord, ReactionRecord, augment_reaction,
                          build_corpus, format_molecule_entry, plan_mix)
from fgkit.mol import parse_smiles

catalog = default_catalog()

# One record, three formats, same key/value multiset.
mol = parse_smiles("CCO")
record = MoleculeRecord(smiles="CCO", names={"iupac": "ethanol"},
                        properties={"mw": "46.07"},
                        fg_annotation=perceive(mol, catalog))
for kind in ("markdown_list", "markdown_table", "json_dict"):
    print(f"--- {kind}\n{format_molecule_entry(record, kind, seed=7).text}")

# Ten-fold augmentation: every rendering is the same reaction.
rxn = ("[CH3:1][OH:2].[C:3](=[O:4])(O)[CH3:5]>>"
       "[CH3:1][O:2][C:3](=[O:4])[CH3:5]")
augmented = augment_reaction(ReactionRecord(rxn_smiles=rxn), 10, seed=3)
print("\naugmentations:")
for rendering in augmented.augmentations[:4]:
    print(" ", rendering)

# Mix planning keeps the requested blend ratio within one entry.
print("\n1:2 blend:", plan_mix({"chem": 1000, "general": 10000},
                               [("chem", 1), ("general", 2)], seed=0).quotas)
print("70/22/8:  ", plan_mix({"a": 10000, "b": 10000, "c": 10000},
                             [("a", 70), ("b", 22), ("c", 8)], seed=0).quotas)

# A tiny end-to-end build; identical seeds give byte-identical output.
with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    (tmp / "mols.smi").write_text("CCO\nCC(=O)O\nOCC\n")
    (tmp / "rxns.smi").write_text(rxn + "\n")
    config = {"molecules": str(tmp / "mols.smi"),
              "reactions": str(tmp / "rxns.smi"),
              "seed": 11, "augment": 3}
    entries, stats = build_corpus(config, catalog)
    print("\nentries:", len(entries), "| counters:",
          json.dumps(stats["counters"]))
