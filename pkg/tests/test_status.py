import os
import subprocess
import sys
from pathlib import Path

import pytest

from aertools.errors import FormatError, ProtocolError
from aertools.status import ExitCodes

SRC = Path(__file__).resolve().parents[1] / "src"

LIBRARY_IMPORT = """
import logging, sys
import aertools.classify, aertools.experiment, aertools.features, aertools.pipeline
from aertools.features import higuchi_fd
for _ in range(50):
    higuchi_fd([0.0, 1.0, 0.5, 0.25, 0.75])
root = logging.getLogger()
print(int("aertools.cli" in sys.modules), len(root.handlers))
"""


def test_library_import_leaves_logging_alone():
    # GIVEN a fresh interpreter that only uses the library
    paths = [str(SRC), os.environ.get("PYTHONPATH", "")]
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(paths))
    # WHEN it imports the subpackages and logs warnings
    result = subprocess.run(
        [sys.executable, "-c", LIBRARY_IMPORT],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    # THEN the command line is never loaded and no handler buffers the records
    cli_loaded, handlers = result.stdout.split()
    assert cli_loaded == "0"
    assert handlers == "0"


def test_exit_codes_are_distinct():
    codes = [c.code for c in ExitCodes.all()]
    assert codes == sorted(set(codes)) == [0, 1, 2, 3]


@pytest.mark.parametrize("error", [FormatError, ProtocolError])
def test_data_errors_share_a_code(error):
    assert error("boom").code is ExitCodes.DATA_ERROR
