"""Additive secret sharing of padded user inputs over the 2^64 ring."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from core.errors import BadK, InvalidInput, LengthMismatch, MissingShare, UnknownNode
from core.pcn import Transaction

logger = logging.getLogger(__name__)

WORD = 1 << 64
WORD_BYTES = 8
PAD_RECORD = (0, 0, 0)


@dataclass(frozen=True)
class UserInput:
    """What one user submits: its outgoing transactions and adjacent balances."""

    owner: str
    transactions: tuple[Transaction, ...]
    balances: tuple[int, ...]


@dataclass(frozen=True)
class Share:
    """One delegate's additive share of a serialized UserInput."""

    owner: str
    index: int
    count: int
    payload: tuple[int, ...]


class ShareRNG:
    """Source of share randomness. Seeded for replayable runs, OS entropy otherwise."""

    def __init__(self, seed: int | None = None):
        self._rng = np.random.default_rng(seed)

    def words(self, n: int) -> list[int]:
        values = self._rng.integers(0, WORD - 1, size=n, dtype=np.uint64, endpoint=True)
        return [int(v) for v in values.tolist()]


def _id_words(txn_id: str) -> tuple[int, list[int]]:
    raw = txn_id.encode("utf-8")
    padded = raw + b"\0" * (-len(raw) % WORD_BYTES)
    words = [
        int.from_bytes(padded[i : i + WORD_BYTES], "big")
        for i in range(0, len(padded), WORD_BYTES)
    ]
    return len(raw), words


def encode_input(user_input: UserInput, nodes: Sequence[str], pad_to: int) -> list[int]:
    """Serialize a user input to ring elements.

    Layout: balance count, balances, pad_to, then pad_to records of
    (amount, recipient index, id byte length, id words). Padding records are
    all zero and carry an empty id.

    Raises:
        InvalidInput: If the list is longer than pad_to or a transaction is
            not sent by the owner
        UnknownNode: If a recipient is not in nodes
    """
    txns = user_input.transactions
    if len(txns) > pad_to:
        raise InvalidInput(
            f"{user_input.owner} submitted {len(txns)} transactions, pad_to is {pad_to}"
        )
    index = {node: i for i, node in enumerate(nodes)}
    words = [len(user_input.balances), *user_input.balances, pad_to]
    for txn in txns:
        if txn.sender != user_input.owner:
            raise InvalidInput(f"{user_input.owner} cannot submit {txn.id} sent by {txn.sender}")
        if txn.recipient not in index:
            raise UnknownNode(txn.recipient, f"recipient of {txn.id}")
        id_len, id_words = _id_words(txn.id)
        words += [txn.amount, index[txn.recipient], id_len, *id_words]
    for _ in range(pad_to - len(txns)):
        words += PAD_RECORD
    if any(w >= WORD for w in words):
        raise InvalidInput(f"Input of {user_input.owner} does not fit 64-bit words")
    return words


def decode_input(words: Sequence[int], owner: str, nodes: Sequence[str]) -> UserInput:
    """Inverse of encode_input; padding records are dropped.

    Raises:
        LengthMismatch: If the words do not form a complete input
    """
    pos = 0

    def take(n: int) -> list[int]:
        nonlocal pos
        if pos + n > len(words):
            raise LengthMismatch(f"Input of {owner} is truncated at word {pos}")
        chunk = list(words[pos : pos + n])
        pos += n
        return chunk

    (num_balances,) = take(1)
    balances = tuple(take(num_balances))
    (pad_to,) = take(1)
    txns = []
    for _ in range(pad_to):
        amount, recipient, id_len = take(3)
        if id_len == 0:
            continue
        raw = b"".join(
            w.to_bytes(WORD_BYTES, "big") for w in take(-(-id_len // WORD_BYTES))
        )[:id_len]
        if recipient >= len(nodes):
            raise LengthMismatch(f"Input of {owner} names recipient index {recipient}")
        try:
            txn_id = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise LengthMismatch(f"Input of {owner} holds a malformed id") from None
        txns.append(Transaction(txn_id, owner, nodes[recipient], amount))
    if pos != len(words):
        raise LengthMismatch(f"Input of {owner} has {len(words) - pos} trailing words")
    return UserInput(owner, tuple(txns), balances)


def share_input(
    user_input: UserInput,
    k_d: int,
    nodes: Sequence[str],
    pad_to: int,
    rng: ShareRNG | None = None,
) -> list[Share]:
    """Split a padded input into k_d additive shares.

    The first k_d-1 payloads are uniform words; the last makes the columns
    sum to the serialized input modulo 2^64.
    """
    if k_d < 1:
        raise BadK(f"Share count must be >= 1, got: {k_d}")
    words = encode_input(user_input, nodes, pad_to)
    rng = rng or ShareRNG()
    payloads = [rng.words(len(words)) for _ in range(k_d - 1)]
    last = list(words)
    for payload in payloads:
        last = [(a - b) % WORD for a, b in zip(last, payload, strict=True)]
    payloads.append(last)
    return [
        Share(user_input.owner, i + 1, k_d, tuple(payload)) for i, payload in enumerate(payloads)
    ]


def reconstruct(shares: Sequence[Share], nodes: Sequence[str]) -> UserInput:
    """Recombine every share of one input.

    Raises:
        MissingShare: If any share index 1..count is absent
        LengthMismatch: If payload lengths differ or the sum does not decode
    """
    if not shares:
        raise MissingShare("No shares to reconstruct from")
    owner, count = shares[0].owner, shares[0].count
    if any(s.owner != owner or s.count != count for s in shares):
        raise InvalidInput("Shares belong to different inputs")
    indices = sorted(s.index for s in shares)
    if indices != list(range(1, count + 1)):
        raise MissingShare(f"Input of {owner} needs shares 1..{count}, got {indices}")
    if len({len(s.payload) for s in shares}) != 1:
        raise LengthMismatch(f"Share payloads of {owner} differ in length")
    words = [sum(column) % WORD for column in zip(*(s.payload for s in shares), strict=True)]
    return decode_input(words, owner, nodes)
