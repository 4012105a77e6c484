import hashlib
import logging
import os
import tempfile
from datetime import datetime
from pathlib import Path
from typing import Any, Dict

import msgpack

from source.apps.core.exceptions import InputError
from source.apps.core.services import BaseService

logger = logging.getLogger(__name__)


def read_text_file(path: str) -> str:
    """Read an input file, turning OS failures into input errors"""
    try:
        return Path(path).read_text(encoding='utf-8')
    except FileNotFoundError:
        raise InputError(f"no such file: {path}", {'path': path})
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}", {'path': path})


class CheckpointStore(BaseService):
    """Versioned msgpack snapshots of a search: spec key, finished partitions, results so far"""

    def __init__(self, path: str, version: int = 1):
        super().__init__()
        self.path = Path(path)
        self.version = version

    @classmethod
    def for_spec(cls, directory: str, spec_key: str, version: int = 1) -> 'CheckpointStore':
        """One file per search specification inside directory"""
        digest = hashlib.md5(spec_key.encode()).hexdigest()[:12]
        return cls(os.path.join(directory, f"search-{digest}.msgpack"), version)

    def _validate(self, data: Dict[str, Any]) -> None:
        for key in ('spec', 'done', 'found'):
            if key not in data:
                raise InputError(f"checkpoint is missing {key!r}")

    def load(self, spec_key: str) -> Dict[str, Any]:
        """Saved state for spec_key, or a fresh state if absent, stale or unreadable"""
        fresh = {'spec': spec_key, 'done': [], 'found': []}
        if not self.path.exists():
            return fresh
        try:
            with open(self.path, 'rb') as f:
                data = msgpack.unpackb(f.read(), raw=False, strict_map_key=False)
        except (OSError, ValueError, msgpack.UnpackException) as e:
            self.add_error(f"Failed to read checkpoint: {str(e)}", 'checkpoint', {'path': str(self.path)})
            return fresh
        if not isinstance(data, dict) or data.get('version') != self.version:
            logger.warning(f"Ignoring checkpoint {self.path}: format version {data.get('version')!r}"
                           if isinstance(data, dict) else f"Ignoring malformed checkpoint {self.path}")
            return fresh
        if not self.validate(data).success or data['spec'] != spec_key:
            logger.warning(f"Ignoring checkpoint {self.path}: written for another search")
            return fresh
        logger.info(f"Resuming from {self.path}: {len(data['done'])} partitions done")
        return {'spec': data['spec'], 'done': list(data['done']), 'found': list(data['found'])}

    def save(self, state: Dict[str, Any]) -> bool:
        """Atomically replace the checkpoint file"""
        payload = dict(state, version=self.version, saved_at=datetime.now().isoformat())
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with tempfile.NamedTemporaryFile(dir=self.path.parent, suffix='.tmp', delete=False) as temp_file:
                temp_file.write(msgpack.packb(payload, use_bin_type=True))
                temp_name = temp_file.name
            os.replace(temp_name, self.path)
            return True
        except OSError as e:
            self.add_error(f"Failed to save checkpoint: {str(e)}", 'checkpoint', {'path': str(self.path)})
            return False

    def clear(self) -> None:
        if self.path.exists():
            self.path.unlink()
            logger.info(f"Removed checkpoint: {self.path}")
