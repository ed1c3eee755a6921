"""Recompute reference summary figures that follow from totals alone.

Only figures that are a function of aggregate counts are covered: weighted densities, the connectedness range
implied by a 649-node giant among 907 institutes, link concentration, and the
growth-rate table under both window-length conventions.
"""
from collabnet.metrics import connectedness_from_sizes, density_from_totals

DENSITIES = [  # (label, nodes, total weight, printed percent)
    ("countries, all years", 66, 1076, 50.2),
    ("institutes, all years", 907, 2583, 0.63),
    ("countries, early period", 33, 159, 30.11),
    ("countries, recent period", 59, 911, 53.24),
]

# (country, early count, recent count, printed growth); early window 15 years
GROWTH = [
    ("United States", 60, 350, 8.0),
    ("China", 31, 265, 11.7),
    ("France", 3, 81, 36.8),
    ("South Korea", 5, 70, 19.1),
    ("Czech Republic", 2, 44, 30.0),
    ("Portugal", 1, 45, 61.4),
]


def main():
    print("weighted density")
    for label, n, w, printed in DENSITIES:
        print(f"  {label:26s} {100 * density_from_totals(n, w):7.2f}%   printed {printed}%")

    rest = 907 - 649
    low = connectedness_from_sizes([649] + [1] * rest)
    high = connectedness_from_sizes([649] + [9] * (rest // 9) + [rest % 9])
    print(f"\nconnectedness, giant 649 of 907: {100 * low:.2f}% (singletons) .. {100 * high:.2f}% (9-node fragments)")

    print(f"\nlink concentration, top 20 of 1076 collaborations holding 570: {100 * 570 / 1076:.1f}%")

    print("\ngrowth = (recent / years) / (early / 15)")
    print(f"  {'country':16s} {'12 yrs':>7s} {'11 yrs':>7s} {'printed':>8s}")
    for name, early, recent, printed in GROWTH:
        g12 = (recent / 12) / (early / 15)
        g11 = (recent / 11) / (early / 15)
        print(f"  {name:16s} {g12:7.1f} {g11:7.1f} {printed:8.1f}")


if __name__ == "__main__":
    main()
