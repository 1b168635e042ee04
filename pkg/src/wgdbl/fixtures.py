"""Access to the bundled JSON fixtures.

The directory can be overridden with the ``WGDBL_FIXTURES`` environment
variable.
"""
import json
import os
from pathlib import Path

NAMES = {
    "FIX-ARROW": "fix-arrow.json",
    "FIX-ISO": "fix-iso.json",
    "FIX-POSB": "fix-posb.json",
    "FIX-BG": "fix-bg.json",
    "FIX-B2A": "fix-b2a.json",
    "V-Z2": "v-z2.json",
    "Z2": "z2.json",
}


def fixtures_dir() -> Path:
    env = os.environ.get("WGDBL_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).with_name("fixtures")


def fixture_path(name: str) -> Path:
    return fixtures_dir() / NAMES.get(name, name)


def load_raw(name: str) -> dict:
    with open(fixture_path(name), encoding="utf-8") as fh:
        return json.load(fh)


def load_category(name: str):
    from .fincat import validate_category
    return validate_category(load_raw(name))


def load_double(name: str):
    from .dblcat import validate_double_category
    return validate_double_category(load_raw(name))


def load_presentation(name: str):
    from .fractions import presentation_from_json
    return presentation_from_json(load_raw(name))
