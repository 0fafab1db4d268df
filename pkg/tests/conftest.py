"""
Shared pytest setup: the suite runs against the testing section of
config/config.json. A local .env may override LSTAR_DEFAULT_BUDGET.
"""

import os
import sys

from dotenv import load_dotenv

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

load_dotenv()
os.environ["ENVIRONMENT"] = "testing"
