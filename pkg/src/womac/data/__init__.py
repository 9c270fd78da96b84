"""Dataset ingestion, filtering and imputation."""

from womac.data.loader import RawDataset, load_csv, write_csv
from womac.data.filters import Dataset, filter_complete, filter_hfc, summarize

__all__ = [
    'RawDataset',
    'Dataset',
    'load_csv',
    'write_csv',
    'filter_complete',
    'filter_hfc',
    'summarize',
]
