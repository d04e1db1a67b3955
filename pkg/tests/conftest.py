import os
import sys

import hypothesis

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=200, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))
