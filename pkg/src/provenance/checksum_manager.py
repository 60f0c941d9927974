"""
Artifact Checksums

SHA-256 digests of written artifacts (traces, reports, frozen banks) and of
the canonical JSON form of config documents, so a rerun can be matched
byte for byte.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

PathLike = Union[str, Path]


def hash_document(data: Any) -> str:
    """
    SHA-256 of a JSON-serializable document with sorted keys

    Examples
    --------
    >>> hash_document({"b": 1, "a": 2}) == hash_document({"a": 2, "b": 1})
    True
    """
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ChecksumManager:
    """Registry of artifact checksums kept in a JSON file"""

    def __init__(self, checksum_file: PathLike = "results/audit_trail/artifact_checksums.json"):
        self.checksum_file = Path(checksum_file)
        self.checksum_file.parent.mkdir(parents=True, exist_ok=True)

        self.checksums: Dict[str, str] = {}
        if self.checksum_file.exists():
            with open(self.checksum_file, 'r', encoding='utf-8') as f:
                self.checksums = json.load(f)

    @staticmethod
    def calculate_checksum(file_path: PathLike) -> str:
        """Hexadecimal SHA-256 of a file, read in chunks"""
        sha256_hash = hashlib.sha256()
        with open(file_path, "rb") as f:
            for byte_block in iter(lambda: f.read(65536), b""):
                sha256_hash.update(byte_block)
        return sha256_hash.hexdigest()

    def register_file(self, file_path: PathLike) -> str:
        key = str(Path(file_path).resolve())
        checksum = self.calculate_checksum(key)
        self.checksums[key] = checksum
        self._save_checksums()
        return checksum

    def verify_file(self, file_path: PathLike) -> bool:
        """
        True if the file still matches its registered checksum

        Raises
        ------
        ValueError
            If the file was never registered
        """
        key = str(Path(file_path).resolve())
        if key not in self.checksums:
            raise ValueError(f"No checksum found for {key}. Register file first.")
        return self.calculate_checksum(key) == self.checksums[key]

    def get_checksum(self, file_path: PathLike) -> Optional[str]:
        return self.checksums.get(str(Path(file_path).resolve()))

    def get_all_checksums(self) -> Dict[str, str]:
        return self.checksums.copy()

    def _save_checksums(self):
        with open(self.checksum_file, 'w', encoding='utf-8') as f:
            json.dump(self.checksums, f, indent=2, sort_keys=True)
