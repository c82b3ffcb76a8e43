"""Append-only simulated ledger with height-based timelocks."""

import logging
from dataclasses import dataclass, replace

from core.errors import InvalidInput

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LedgerEvent:
    height: int
    kind: str
    party: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "height": self.height,
            "kind": self.kind,
            "party": self.party,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Timelock:
    """Coins locked until expires_at; refunded to owner if still locked then."""

    label: str
    owner: str
    expires_at: int
    settled: bool = False


@dataclass(frozen=True)
class Ledger:
    height: int = 0
    posted: tuple[LedgerEvent, ...] = ()
    timelocks: tuple[Timelock, ...] = ()

    def post(self, kind: str, party: str, detail: str = "") -> "Ledger":
        event = LedgerEvent(self.height, kind, party, detail)
        return replace(self, posted=self.posted + (event,))

    def lock(self, label: str, owner: str, expires_at: int) -> "Ledger":
        return replace(self, timelocks=self.timelocks + (Timelock(label, owner, expires_at),))

    def settle_all(self) -> "Ledger":
        """Release every open timelock, as happens when an execution commits."""
        return replace(self, timelocks=tuple(replace(t, settled=True) for t in self.timelocks))

    def open_timelocks(self) -> list[Timelock]:
        return [t for t in self.timelocks if not t.settled]


def advance_ledger(ledger: Ledger, delta_height: int) -> Ledger:
    """Move time forward and refund every timelock that expired on the way.

    Raises:
        InvalidInput: If delta_height is negative
    """
    if delta_height < 0:
        raise InvalidInput(f"Ledger height cannot decrease, got delta {delta_height}")
    if delta_height == 0:
        return ledger
    height = ledger.height + delta_height
    events = list(ledger.posted)
    timelocks = []
    for lock in ledger.timelocks:
        if not lock.settled and lock.expires_at <= height:
            events.append(LedgerEvent(height, "refund", lock.owner, lock.label))
            lock = replace(lock, settled=True)
        timelocks.append(lock)
    refunded = len(events) - len(ledger.posted)
    if refunded:
        logger.info(f"Height {height}: refunded {refunded} expired timelocks")
    return Ledger(height, tuple(events), tuple(timelocks))
