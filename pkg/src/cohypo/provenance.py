"""Provenance sidecars: every artifact sits next to its resolved config.

Sidecars deliberately contain no timestamps so identical runs produce
byte-identical files.
"""

import hashlib
import json
import os

import cohypo


def sha256_file(path, chunk=1 << 20):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        while True:
            block = fh.read(chunk)
            if not block:
                break
            digest.update(block)
    return digest.hexdigest()


def provenance_path(out_path):
    return out_path + ".prov.json"


def write_provenance(out_path, command, params, inputs=(), outputs=()):
    """Record resolved params plus input/output content hashes."""
    doc = {
        "tool": "cohypo",
        "version": cohypo.__version__,
        "command": command,
        "params": params,
        "inputs": {os.path.basename(p): sha256_file(p) for p in inputs if os.path.exists(p)},
        "outputs": {os.path.basename(p): sha256_file(p) for p in outputs if os.path.exists(p)},
    }
    with open(provenance_path(out_path), "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return doc


def read_provenance(out_path):
    path = provenance_path(out_path)
    if not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
