# Copyright 2026 The xforge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python access to the xforge core.

Datasets are passed as SQuAD JSON text; matrices as numpy arrays.
"""

import json

from ._xforge import *  # noqa: F401,F403
from ._xforge import Error, __version__, run_manifest as _run_manifest


def run_manifest(manifest, base_dir="."):
  """Runs a manifest (JSON text or dict) and returns the report as a dict."""
  if not isinstance(manifest, str):
    manifest = json.dumps(manifest)
  return json.loads(_run_manifest(manifest, str(base_dir)))
