import os
import tempfile

# keep test runs out of the project log file
os.environ.setdefault("DIRACL2_LOG_DIR", tempfile.mkdtemp(prefix="diracl2-logs-"))
