"""Thin wrapper over the compiled extension; JSON results come back as dicts."""

import json

from . import diagramforge_py as _ext

__all__ = [
    "generate",
    "sample_seed",
    "complexity",
    "filter",
    "clean",
    "evaluate",
    "evaluate_standalone",
    "reward",
    "extract_svg_block",
]

sample_seed = _ext.sample_seed
clean = _ext.clean
reward = _ext.reward
extract_svg_block = _ext.extract_svg_block


def generate(seed, overrides=None):
    """Returns (svg_text, metadata_dict)."""
    svg, meta = _ext.generate(seed, {k: str(v) for k, v in (overrides or {}).items()})
    return svg, json.loads(meta)


def complexity(svg):
    return json.loads(_ext.complexity(svg))


def filter(text, min_ratio=0.40, max_complex=50):
    return json.loads(_ext.filter(text, min_ratio, max_complex))


def evaluate(metadata, pred=None):
    if not isinstance(metadata, str):
        metadata = json.dumps(metadata)
    return json.loads(_ext.evaluate(metadata, pred))


def evaluate_standalone(reference, pred=None):
    return json.loads(_ext.evaluate_standalone(reference, pred))
