import sys
import threading

from Proof_Checker.config import settings

sys.setrecursionlimit(max(sys.getrecursionlimit(), settings.RECURSION_LIMIT))
threading.stack_size(settings.thread_stack_bytes())
