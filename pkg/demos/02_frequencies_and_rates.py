"""Frequency tables, vaccination-rate tables, and proportion intervals.

Reproduces the planted registry split whose rate table rounds to
0.41 / 2.84 / 96.76 percent (half-away-from-zero at 2 decimals).
"""

from mcaw import (SynthSpec, from_raw, frequency_table, generate_synthetic,
                  proportion_ci, rate_by_group)

spec = SynthSpec(
    n_rows=3915,
    columns={
        "grupo_riesgo": {"ESTUDIANTES": 16, "INTERNOS": 111,
                         "PERSONAL DE SALUD": 3788},
        "sexo": {"F": 2430, "M": 1485},
    },
    seed=42, mode="exact-counts")
ds = from_raw(generate_synthetic(spec), ["grupo_riesgo", "sexo"])

print("frequency table (sexo):")
freq = frequency_table(ds, "sexo")
for label, count, prop in zip(freq.labels, freq.counts, freq.proportions):
    print(f"  {label:<4} {count:>5}  {prop:.4f}")

print("\nvaccination rate by risk group:")
rate = rate_by_group(ds, "grupo_riesgo")
for label, count, pct in zip(rate.labels, rate.counts, rate.percentages):
    print(f"  {label:<20} {count:>5}  {pct:>6.2f}%")

print("\nWilson 95% interval for the intern share:")
est = proportion_ci(111, 3915, 0.95)
print(f"  p = {est.estimate:.4f}, CI = ({est.lo:.4f}, {est.hi:.4f})")
