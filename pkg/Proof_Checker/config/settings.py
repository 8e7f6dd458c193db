"""
Configuration settings for the proof checker
"""
import os
from typing import Optional
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _optional_int(name: str) -> Optional[int]:
    value = os.getenv(name, "").strip()
    return int(value) if value else None


class Settings:
    """Checker settings and configuration"""

    # Checking
    JOBS: int = int(os.getenv("PROOF_CHECKER_JOBS", "1"))
    STEP_LIMIT: Optional[int] = _optional_int("PROOF_CHECKER_STEP_LIMIT")
    WORKER_BACKEND: str = os.getenv("PROOF_CHECKER_WORKER_BACKEND", "thread")

    # Parse-stage handoff queue capacity
    PARSE_QUEUE: int = int(os.getenv("PROOF_CHECKER_PARSE_QUEUE", "64"))

    # Logging
    LOG_LEVEL: str = os.getenv("PROOF_CHECKER_LOG_LEVEL", "WARNING").upper()
    LOG_FORMAT: str = "[%(levelname)s] %(message)s"

    # Deeply nested proof terms recurse in the kernel
    RECURSION_LIMIT: int = int(os.getenv("PROOF_CHECKER_RECURSION_LIMIT", "100000"))
    THREAD_STACK_MB: int = int(os.getenv("PROOF_CHECKER_THREAD_STACK_MB", "256"))

    @classmethod
    def thread_stack_bytes(cls) -> int:
        """Stack size for checker threads, in bytes"""
        return cls.THREAD_STACK_MB * 1024 * 1024


# Singleton instance
settings = Settings()
