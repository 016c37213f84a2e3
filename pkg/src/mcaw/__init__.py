"""MCA workbench for categorical registry data.

Ingests data-dictionary-described CSV registries, fits multiple
correspondence analysis on the indicator matrix, and exposes variance
tables, coordinates, cos2, contributions, dimension descriptions, rate
tables, and group confidence ellipses through a library, CLI, and HTTP
service.
"""

from .dataset import (CategoricalDataset, FrequencyTable, ProportionEstimate,
                      RateTable, Variable, bin_age, filter_rows,
                      frequency_table, from_raw, proportion_ci, rate_by_group)
from .errors import (DatasetError, DegenerateError, DictionaryError,
                     EmptyDatasetError, McawError, ParseError, SpecError)
from .inference import (DimensionDescription, EllipseSpec, describe_dimension,
                        group_ellipse)
from .ingest import (DataDictionary, RawTable, SynthSpec, generate_synthetic,
                     load_dictionary, load_dictionary_file, parse_csv,
                     parse_csv_text, serialize_csv, validate, write_csv)
from .mca import (IndicatorMatrix, McaModel, adjust_eigenvalues, burt_matrix,
                  contributions, coordinates, cos2, eigenvalue_table, fit_mca,
                  indicator_matrix, project_supplementary, variable_eta2)

__version__ = "0.1.0"

__all__ = [
    "CategoricalDataset", "DataDictionary", "DimensionDescription",
    "EllipseSpec", "FrequencyTable", "IndicatorMatrix", "McaModel",
    "ProportionEstimate", "RateTable", "RawTable", "SynthSpec", "Variable",
    "adjust_eigenvalues", "bin_age", "burt_matrix", "contributions",
    "coordinates", "cos2", "describe_dimension", "eigenvalue_table",
    "filter_rows", "fit_mca", "frequency_table", "from_raw",
    "generate_synthetic", "group_ellipse", "indicator_matrix",
    "load_dictionary", "load_dictionary_file", "parse_csv", "parse_csv_text",
    "project_supplementary", "proportion_ci", "rate_by_group",
    "serialize_csv", "validate", "variable_eta2", "write_csv",
    "DatasetError", "DegenerateError", "DictionaryError", "EmptyDatasetError",
    "McawError", "ParseError", "SpecError",
]
