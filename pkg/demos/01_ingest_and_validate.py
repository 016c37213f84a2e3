"""Load the bundled vaccination registry sample and validate it.

Run from the repository root:  python3 demos/01_ingest_and_validate.py
"""

from pathlib import Path

from mcaw import load_dictionary_file, parse_csv, validate

DATA = Path(__file__).resolve().parent.parent / "data"

dictionary = load_dictionary_file(DATA / "dictionary.yaml")
print("dictionary columns:")
for col in dictionary.columns:
    detail = ""
    if col.kind == "categorical":
        detail = ", ".join(col.allowed_values or ())
    elif col.kind == "date":
        detail = col.date_format
    elif col.kind == "integer":
        detail = f"range [{col.min_value}, {col.max_value}]"
    print(f"  {col.name:<18} {col.kind:<12} {detail}")

raw = parse_csv(DATA / "sample_registry.csv", dictionary)
print(f"\nparsed {raw.n_rows} rows")
print("first row:", dict(raw.rows[0]))

issues = validate(raw)
if issues:
    for issue in issues:
        print(f"row {issue.row}, {issue.column}: {issue.message}")
else:
    print("validation: clean, no issues")
