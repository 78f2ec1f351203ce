"""
JSON Document Loading

Reads the scenario, detector and black-box documents used by the CLI and the
HTTP service, and writes report documents back out.
"""

from typing import Dict, Optional, Union
from pathlib import Path
import json
import logging

from ..models.discrimination import BinaryPovm, detector_from_dict
from ..models.errors import InconsistentDocument
from ..models.nosignal import BlackBoxResponse
from ..models.qubit import BlochVector
from ..models.scenario import Scenario

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def load_document(path: PathLike) -> Dict:
    """Load a JSON object from disk; malformed JSON is a domain error"""
    path = Path(path)
    logger.debug(f"Loading document {path}")
    with open(path, "r") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise InconsistentDocument(f"{path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise InconsistentDocument(f"{path} must contain a JSON object")
    return data


def load_scenario(path: PathLike) -> Scenario:
    scenario = Scenario.from_dict(load_document(path))
    logger.info(f"✅ Loaded scenario from {path} (p={scenario.p:.6f})")
    return scenario


def load_detector(path: PathLike, r0: Optional[BlochVector] = None,
                  r1: Optional[BlochVector] = None) -> BinaryPovm:
    return detector_from_dict(load_document(path), r0, r1)


def load_blackbox(path: PathLike) -> BlackBoxResponse:
    return BlackBoxResponse.from_dict(load_document(path))


def dump_document(document: Dict, path: Optional[PathLike] = None) -> str:
    """Serialize `document`; also write it to `path` when given"""
    text = json.dumps(document, indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
        logger.info(f"💾 Wrote {path}")
    return text
