import os

__version__ = "0.3.0"

# Get the base directory of the project (the directory containing this file)
BASE_DIR = os.path.dirname(os.path.abspath(__file__))

# Path to the data directory (assumes 'data' is at the same level as 'adlab')
DATA_DIR = os.path.join(BASE_DIR, '..', 'data')

CONFIGS_DIR = os.path.abspath(os.path.join(DATA_DIR, 'configs'))
MATRICES_DIR = os.path.abspath(os.path.join(DATA_DIR, 'matrices'))

# Output root used when neither the config nor the CLI names one
DEFAULT_RUNS_DIR = os.environ.get('ADLAB_OUTPUT_DIR', 'runs')
