"""Describe the leading dimensions and draw group confidence ellipses."""

from pathlib import Path

from mcaw import (describe_dimension, fit_mca, from_raw, group_ellipse,
                  load_dictionary_file, parse_csv)
from mcaw.inference import format_p

DATA = Path(__file__).resolve().parent.parent / "data"

dictionary = load_dictionary_file(DATA / "dictionary.yaml")
raw = parse_csv(DATA / "sample_registry.csv", dictionary)
ds = from_raw(raw, ["grupo_riesgo", "sexo", "fabricante"])
model = fit_mca(ds)

for axis in (1, 2):
    desc = describe_dimension(model, ds, axis)
    print(f"dimension {axis}:")
    for row in desc.variables:
        print(f"  {row.name:<14} eta2={row.eta2:.4f}  p={format_p(row.p_value)}")
    print("  category estimates:")
    for row in desc.categories[:4]:
        print(f"    {row.label:<45} est={row.estimate:+.4f}  "
              f"p={format_p(row.p_value)}")
    print()

ellipses, warnings = group_ellipse(model, ds, "sexo", axes=(1, 2), level=0.95)
print("95% barycenter ellipses by sexo:")
for e in ellipses:
    print(f"  {e.label}: center=({e.center[0]:+.3f}, {e.center[1]:+.3f}) "
          f"semi-axes=({e.semi_major:.3f}, {e.semi_minor:.3f}) "
          f"angle={e.angle:+.3f} rad, m={e.member_count}")
for w in warnings:
    print("  warning:", w)
