"""Level sets of slowly decaying measures.

The level set of order n collects the words whose cylinder mass first drops
to c**n, where c is the worst one-step cylinder ratio.  For the uniform
two-symbol measure that is just the words of length n; for a skewed measure
the words have wildly different lengths but comparable mass.
"""

from pathlib import Path

from rifs import (BernoulliMeasure, MarkovMeasure, entropy, entropy_estimate,
                  level_set, slow_decay_constant, word_to_string,
                  write_levelset_csv)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

uniform = BernoulliMeasure([0.5, 0.5])
skew = BernoulliMeasure([0.8, 0.2])
markov = MarkovMeasure.from_transition([[0.7, 0.3], [0.4, 0.6]])

for name, m in (("uniform", uniform), ("skew", skew), ("markov", markov)):
    c = slow_decay_constant(m)
    h = entropy(m)
    print(f"{name:8s} c = {c:.3f}   entropy = {h:.6f}   "
          f"finite-10 estimate = {entropy_estimate(m, 10):.6f}")

print("\nuniform level set, n = 3 (the full word tree):")
print(" ", [word_to_string(w) for w in level_set(uniform, 3).words])

print("\nskewed level set, n = 1 (nine words of mixed length, mass 1):")
ls = level_set(skew, 1)
for w, mu in zip(ls.words, ls.measures):
    print(f"  {word_to_string(w):>9s}  mass {mu:.8f}")
print(f"  total mass {ls.mass:.12f}, comparability ratio "
      f"{ls.measure_bounds[1] / ls.measure_bounds[0]:.2f} (bound {1 / 0.2:.0f})")

path = out / "skew_level_set_n4.csv"
write_levelset_csv(level_set(skew, 4), path)
print(f"\nwrote {path}")
