import hashlib
import logging
import sys
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml


def calculate_sha256(file_path: Union[str, Path]) -> str:
    """Hex sha256 digest of a data or output file, as recorded in audit manifests."""
    digest = hashlib.sha256()
    with open(file_path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def setup_logging(log_level: str = "INFO", log_path: Optional[Path] = None) -> logging.Logger:
    """
    Set up logging configuration

    Log lines go to stderr so that stdout only carries command output.

    Args:
        log_level (str): Logging level (DEBUG, INFO, WARNING, ERROR)
        log_path: Optional file that receives a copy of every record

    Returns:
        logging.Logger: Configured logger
    """
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_path is not None:
        ensure_dir_exists(Path(log_path).parent)
        handlers.append(logging.FileHandler(log_path))
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )
    return logging.getLogger(__name__)


def ensure_dir_exists(dir_path: Union[str, Path]) -> Path:
    """Create an output directory (and parents) if missing."""
    path = Path(dir_path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def get_project_root() -> Path:
    """Repository root: the directory holding config.yaml and database/."""
    return Path(__file__).parent.parent


_active_config: Optional[Path] = None


def set_config_path(path: Optional[Union[str, Path]]) -> None:
    """Make another configuration file the default for load_config()."""
    global _active_config
    _active_config = Path(path).resolve() if path is not None else None


@lru_cache(maxsize=None)
def _read_config(path: str) -> Dict[str, Any]:
    with open(path, 'r') as f:
        return yaml.safe_load(f) or {}


def load_config(path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Load the YAML configuration (config.yaml at the project root by default).

    Args:
        path: Optional path to an alternative configuration file

    Returns:
        Dict[str, Any]: Parsed configuration sections
    """
    if path is None:
        path = _active_config or get_project_root() / "config.yaml"
    config_path = Path(path)
    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file {config_path} not found")
    return _read_config(str(config_path.resolve()))


def resolve_data_path(relative: Union[str, Path]) -> Path:
    """Resolve a data path from the config against the project root."""
    path = Path(relative)
    return path if path.is_absolute() else get_project_root() / path


def format_fraction(value: Fraction) -> str:
    """Serialize an exact rational as reduced "p/q", or "p" when q = 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: Union[str, int]) -> Fraction:
    """Parse "p/q" or an integer literal into an exact rational."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"Expected a rational string like 'p/q', got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Malformed rational {text!r}: {e}") from e
