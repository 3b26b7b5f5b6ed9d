from enum import Enum
from typing import Any

from pydantic import BaseModel


class CommandStatus(str, Enum):
    OK = "ok"
    DOMAIN_ERROR = "domain_error"
    SIZE_ERROR = "size_error"
    NOT_FOUND = "not_found"


EXIT_CODES = {
    CommandStatus.OK: 0,
    CommandStatus.DOMAIN_ERROR: 2,
    CommandStatus.SIZE_ERROR: 3,
    CommandStatus.NOT_FOUND: 3,
}


class CommandResult(BaseModel):
    status: CommandStatus
    payload: Any = None
    timing_ms: float = 0.0

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]
