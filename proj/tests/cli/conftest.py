import json
import os
import pathlib
import subprocess

import jsonschema
import pytest
import referencing

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMAS = ROOT / "schemas"
DATA = ROOT / "tests" / "data"


def _registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], referencing.Resource.from_contents(doc)))
    return referencing.Registry().with_resources(resources)


REGISTRY = _registry()


def validate(doc, name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


@pytest.fixture(scope="session")
def cli():
    exe = os.environ.get("GPCA_CLI", str(ROOT / "build" / "gpca"))
    if not pathlib.Path(exe).exists():
        pytest.skip(f"gpca binary not found at {exe}")
    return exe


@pytest.fixture
def run(cli, tmp_path):
    def _run(*args, check=True):
        proc = subprocess.run([cli, *map(str, args)], cwd=tmp_path, capture_output=True, text=True)
        if check and proc.returncode != 0:
            raise AssertionError(f"gpca {' '.join(map(str, args))} exited {proc.returncode}: {proc.stderr}")
        return proc

    return _run


@pytest.fixture
def dataset(run, tmp_path):
    def _make(spec, name="data"):
        spec_path = tmp_path / f"{name}.spec.json"
        spec_path.write_text(json.dumps(spec))
        out = tmp_path / f"{name}.csv"
        run("generate", "--spec", spec_path, "--out", out)
        return out

    return _make
