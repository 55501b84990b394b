# Format and canonicalization-aware accuracy rewards for
# reasoning-formatted answers.

from fgkit.canon import enumerate_random, write_canonical
from fgkit.mol import parse_smiles
from fgkit.rewards import (RewardConfig, accuracy_reward, combined_reward,
                           format_reward)

# Format: exactly one reasoning block, one non-empty answer block,
# nothing after.
print(format_reward("<think>steps</think><answer>CCO</answer>"))   # 1.0
print(format_reward("<answer>CCO</answer>"))                       # 0.0
print(format_reward("<think>a</think><answer>CCO</answer>junk"))   # 0.0

# Accuracy canonicalizes every SMILES component first, so any rendering
# of the right molecule scores 1.
gold = write_canonical(parse_smiles("CC(=O)Oc1ccccc1"))
for rendering in enumerate_random(parse_smiles(gold), 3, seed=1):
    print(rendering, "->", accuracy_reward(rendering, gold, "smiles"))
print(accuracy_reward("C(C)O.Cl", "Cl.CCO", "smiles"))   # multiset match
print(accuracy_reward("garbage(", "CCO", "smiles"))      # 0, never raises

# Combined scoring with custom tags and weights.
config = RewardConfig(think_open="[R]", think_close="[/R]",
                      answer_open="[A]", answer_close="[/A]",
                      accuracy_weight=2.0)
result = combined_reward("[R]because[/R][A]OCC[/A]", "CCO", "smiles", config)
print(result.to_dict())
