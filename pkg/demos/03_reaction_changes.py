# Annotating functional-group and structural changes of atom-mapped
# reactions.

import json

from fgkit.reaction import (describe, fg_changes, parse_reaction,
                            reaction_centers)

# Fischer esterification: the hydroxyls react, an ester appears.
esterification = ("[CH3:1][OH:2].[C:3](=[O:4])(O)[CH3:5]>>"
                  "[CH3:1][O:2][C:3](=[O:4])[CH3:5]")
rxn = parse_reaction(esterification)
centers = reaction_centers(rxn)
print("reaction centers (map numbers):", sorted(centers.map_numbers))

change = fg_changes(rxn)
print("reacting :", [g.name for g in change.reacting_groups])
print("resulting:", [g.name for g in change.resulting_groups])
print("summary  :", describe(change))

# Ring events: epoxide opening breaks the three-membered ring.
epoxide = "[CH2:1]1[CH2:2][O:3]1.[OH2:4]>>[OH:4][CH2:1][CH2:2][OH:3]"
change = fg_changes(parse_reaction(epoxide))
print("\n" + describe(change))
print(json.dumps(change.to_dict(), indent=2))

# Unmapped spectators are fine; reagents (the middle field) never count
# toward centers or groups.
with_reagent = ("[CH3:1][OH:2].[C:3](=[O:4])(O)[CH3:5]>OS(=O)(=O)O>"
                "[CH3:1][O:2][C:3](=[O:4])[CH3:5]")
print("\nwith reagent:", describe(fg_changes(parse_reaction(with_reagent))))
