"""
Run Metadata

Sidecar JSON describing each artifact (what produced it, from which config
and seed) and one summary record per run. Timestamps live here and in the
audit trail only, never inside the numeric artifacts.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy
import scipy

from .. import __version__


class MetadataGenerator:
    """Builds and writes provenance records"""

    @staticmethod
    def generate_artifact_metadata(
        file_path: Union[str, Path],
        artifact_type: str,
        description: str,
        parameters: Optional[Dict[str, Any]] = None,
        config_hash: Optional[str] = None,
        checksum: Optional[str] = None,
    ) -> Dict[str, Any]:
        """
        Metadata of one artifact

        Parameters
        ----------
        file_path : str or Path
            Artifact path
        artifact_type : str
            e.g. 'bank', 'condition_report', 'trace', 'detection_report',
            'thresholds', 'tpr_table'
        description : str
            Human-readable description
        parameters : dict, optional
            Command settings (seed, dt, scenario, runs)
        config_hash : str, optional
            SHA-256 of the config document
        checksum : str, optional
            SHA-256 of the artifact
        """
        file_path = Path(file_path)
        return {
            "file_info": {
                "name": file_path.name,
                "path": str(file_path.resolve()),
                "type": artifact_type,
                "description": description,
                "size_bytes": file_path.stat().st_size if file_path.exists() else None,
                "created": datetime.now().isoformat(),
            },
            "provenance": {
                "config_sha256": config_hash,
                "parameters": parameters or {},
                "toolkit_version": __version__,
                "numpy": numpy.__version__,
                "scipy": scipy.__version__,
            },
            "integrity": {
                "checksum_algorithm": "SHA-256",
                "checksum": checksum,
            },
        }

    @staticmethod
    def save_metadata(metadata: Dict[str, Any], output_path: Union[str, Path]) -> Path:
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(metadata, f, indent=2, default=str)
        return output_path

    @staticmethod
    def generate_run_metadata(
        run_id: str,
        command: str,
        config_hash: str,
        seed: int,
        output_files: List[str],
        runtime_seconds: float,
        user: str,
    ) -> Dict[str, Any]:
        return {
            "run_info": {
                "run_id": run_id,
                "command": command,
                "timestamp": datetime.now().isoformat(),
                "user": user,
                "runtime_seconds": runtime_seconds,
            },
            "configuration": {"config_sha256": config_hash, "seed": seed},
            "outputs": {"files": output_files, "count": len(output_files)},
        }
