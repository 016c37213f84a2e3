"""Fit MCA on the bundled registry sample and draw a category factor map.

Shows the variance table, category coordinates with cos2 and
contributions, and writes factor_map.svg next to this script.
"""

from pathlib import Path

from mcaw import (coordinates, cos2, eigenvalue_table, fit_mca, from_raw,
                  load_dictionary_file, parse_csv, variable_eta2)
from mcaw.report import axis_caption, render_svg

DATA = Path(__file__).resolve().parent.parent / "data"

dictionary = load_dictionary_file(DATA / "dictionary.yaml")
raw = parse_csv(DATA / "sample_registry.csv", dictionary)
ds = from_raw(raw, ["grupo_riesgo", "sexo", "fabricante", "edad"],
              age_breaks=[18, 30, 45, 130])
model = fit_mca(ds)

print("variance table:")
for row in eigenvalue_table(model):
    print(f"  dim {row['dim']}: lambda={row['eigenvalue']:.4f} "
          f"{row['percent']:6.2f}%  cum {row['cumulative']:6.2f}%")

labels, coords = coordinates(model, "categories", dims=[1, 2])
_, quality = cos2(model, "categories", dims=[1, 2])
print("\ncategory coordinates (dims 1-2) and cos2:")
for lab, xy, q in zip(labels, coords, quality):
    print(f"  {lab:<45} ({xy[0]:+.3f}, {xy[1]:+.3f})  "
          f"cos2={q[0] + q[1]:.3f}")

names, eta2 = variable_eta2(model)
print("\nsquared correlation ratios (variables map coordinates):")
for name, row in zip(names, eta2):
    print(f"  {name:<14} dim1={row[0]:.3f} dim2={row[1]:.3f}")

points = [{"x": float(c[0]), "y": float(c[1]), "label": lab}
          for lab, c in zip(labels, coords)]
svg = render_svg(points, x_caption=axis_caption(model, 1),
                 y_caption=axis_caption(model, 2))
out = Path(__file__).resolve().parent / "factor_map.svg"
out.write_text(svg, encoding="utf-8")
print(f"\nwrote {out}")
