"""
Run Audit Logger

Timestamped, attributable event log for one CLI invocation: which command
ran, with which seed and settings, and which artifacts it wrote. Events are
kept as structured records and mirrored to a text log.

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import getpass
import json
import logging
import platform
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union


class AuditLogger:
    """
    Audit trail of one toolkit run

    Each event records time, level, message, user and run id; file events
    add the artifact path and its SHA-256 checksum.
    """

    def __init__(
        self,
        log_dir: Union[str, Path] = "results/audit_trail",
        run_id: Optional[str] = None,
        user: Optional[str] = None,
        system_info: Optional[Dict[str, Any]] = None,
        console: bool = False,
    ):
        """
        Parameters
        ----------
        log_dir : str or Path
            Directory for the text log and the audit JSON
        run_id : str, optional
            Run identifier (timestamp when None)
        user : str, optional
            Operator (detected when None)
        system_info : dict, optional
            Interpreter and platform details (collected when None)
        console : bool
            Mirror INFO events to stderr
        """
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)

        self.start_time = datetime.now()
        self.run_id = run_id or self.start_time.strftime("%Y%m%d_%H%M%S")
        self.user = user or self._detect_user()
        self.system_info = system_info or self._get_system_info()
        self.events: List[Dict[str, Any]] = []

        self.text_log_path = self.log_dir / f"{self.run_id}_run_log.txt"
        self._init_text_logger(console)

        self.log("Audit logger initialized", details={"run_id": self.run_id, "user": self.user})

    @staticmethod
    def _detect_user() -> str:
        try:
            return getpass.getuser()
        except (KeyError, OSError):
            return "unknown"

    @staticmethod
    def _get_system_info() -> Dict[str, str]:
        import numpy
        import scipy

        return {
            "python_version": sys.version.split()[0],
            "platform": platform.platform(),
            "numpy": numpy.__version__,
            "scipy": scipy.__version__,
        }

    def _init_text_logger(self, console: bool):
        self.text_logger = logging.getLogger(f"cafdi.audit.{self.run_id}")
        self.text_logger.setLevel(logging.DEBUG)
        self.text_logger.propagate = False
        for handler in list(self.text_logger.handlers):
            self.text_logger.removeHandler(handler)
            handler.close()

        formatter = logging.Formatter(
            '%(asctime)s | %(levelname)-8s | %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        fh = logging.FileHandler(self.text_log_path, mode='w', encoding='utf-8')
        fh.setLevel(logging.DEBUG)
        fh.setFormatter(formatter)
        self.text_logger.addHandler(fh)

        if console:
            ch = logging.StreamHandler()
            ch.setLevel(logging.INFO)
            ch.setFormatter(formatter)
            self.text_logger.addHandler(ch)

    def log(self, message: str, level: str = "INFO", details: Optional[Dict[str, Any]] = None):
        """
        Record an event

        Parameters
        ----------
        message : str
            Event description
        level : str
            DEBUG, INFO, WARNING, ERROR or CRITICAL
        details : dict, optional
            Structured payload (settings, results)
        """
        event = {
            "timestamp": datetime.now().isoformat(),
            "level": level,
            "message": message,
            "user": self.user,
            "run_id": self.run_id,
        }
        if details:
            event["details"] = details
        self.events.append(event)

        log_func = getattr(self.text_logger, level.lower(), self.text_logger.info)
        if details:
            log_func(f"{message} | Details: {json.dumps(details, default=str)}")
        else:
            log_func(message)

    def log_command(self, command: str, arguments: Dict[str, Any], config_hash: Optional[str] = None):
        details = {"command": command, "arguments": arguments}
        if config_hash:
            details["config_sha256"] = config_hash
        self.log(f"Command '{command}' started", details=details)

    def log_file_operation(
        self,
        operation: str,
        file_path: Union[str, Path],
        checksum: Optional[str] = None,
        metadata: Optional[Dict[str, Any]] = None,
    ):
        """
        Record a file event

        Parameters
        ----------
        operation : str
            created, read or modified
        file_path : str or Path
            Artifact path
        checksum : str, optional
            SHA-256 of the file
        metadata : dict, optional
            Extra artifact details
        """
        details: Dict[str, Any] = {"operation": operation, "file_path": str(file_path)}
        if checksum:
            details["sha256"] = checksum
        if metadata:
            details["metadata"] = metadata
        self.log(f"File {operation}: {Path(file_path).name}", details=details)

    def save(self, output_path: Optional[Union[str, Path]] = None) -> Path:
        """Write the audit trail JSON and return its path"""
        output_path = Path(output_path) if output_path else self.log_dir / f"{self.run_id}_audit_trail.json"
        end_time = datetime.now()

        record = {
            "run_id": self.run_id,
            "user": self.user,
            "system_info": self.system_info,
            "start_time": self.start_time.isoformat(),
            "end_time": end_time.isoformat(),
            "runtime_seconds": (end_time - self.start_time).total_seconds(),
            "total_events": len(self.events),
            "events": self.events,
        }
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(record, f, indent=2, default=str)

        self.log(f"Audit trail saved to {output_path}")
        return output_path

    def get_summary(self) -> Dict[str, Any]:
        level_counts: Dict[str, int] = {}
        for event in self.events:
            level_counts[event["level"]] = level_counts.get(event["level"], 0) + 1
        return {
            "run_id": self.run_id,
            "total_events": len(self.events),
            "level_breakdown": level_counts,
            "start_time": self.start_time.isoformat(),
            "runtime_seconds": (datetime.now() - self.start_time).total_seconds(),
        }

    def close(self):
        for handler in list(self.text_logger.handlers):
            self.text_logger.removeHandler(handler)
            handler.close()
