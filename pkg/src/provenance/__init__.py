"""
Provenance Module

Audit trail, artifact checksums and metadata sidecars for CLI runs.

Modules:
- audit_logger: AuditLogger (structured event log plus text log)
- checksum_manager: ChecksumManager, hash_document (SHA-256)
- metadata_generator: MetadataGenerator (artifact and run records)
"""

from .audit_logger import AuditLogger
from .checksum_manager import ChecksumManager, hash_document
from .metadata_generator import MetadataGenerator

__all__ = ["AuditLogger", "ChecksumManager", "MetadataGenerator", "hash_document"]
