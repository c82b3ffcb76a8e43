"""Tests for input validation and local validation of views."""

from dataclasses import replace

import numpy as np
import pytest

from cli.generate import random_instance
from core.pcn import Flow
from protocol.config import ProtocolConfig
from protocol.pipeline import run_flow_computation, validate_views
from protocol.validation import (
    INCOMING_CAPACITY,
    OUTGOING_CAPACITY,
    AbortReason,
    PeerData,
    local_validate,
    validate_inputs,
)
from protocol.views import RestrictedTxn, build_views
from solvers.ilp import client_totals
from tests.conftest import make_topology, txn


class TestValidateInputs:
    """Tests for validate_inputs."""

    def test_all_below_capacity(self, two_hub_topology, three_transactions):
        """Nothing is dropped when every sum is strictly below capacity."""
        result = validate_inputs(two_hub_topology, three_transactions)
        assert result.kept == tuple(three_transactions)
        assert result.rejected_users == ()

    def test_outgoing_at_capacity(self):
        """Reaching cap_out exactly drops the whole outgoing list."""
        topo = make_topology({"h1": 50, "h2": 50}, {"c1": ("h1", 10, 10), "c2": ("h2", 50, 50)})
        txns = [txn("t1", "c1", "c2", 7), txn("t2", "c1", "c2", 3), txn("t3", "c2", "c1", 4)]
        result = validate_inputs(topo, txns)
        assert result.kept == (txns[2],)
        assert result.rejected_users == (("c1", OUTGOING_CAPACITY),)

    def test_incoming_at_capacity(self):
        """Reaching cap_in exactly drops the whole incoming list."""
        topo = make_topology({"h1": 50, "h2": 50}, {"c1": ("h1", 50, 50), "c2": ("h2", 50, 6)})
        txns = [txn("t1", "c1", "c2", 4), txn("t2", "h1", "c2", 2), txn("t3", "c2", "c1", 1)]
        result = validate_inputs(topo, txns)
        assert result.kept == (txns[2],)
        assert result.rejected_users == (("c2", INCOMING_CAPACITY),)

    def test_cascade_keeps_recipient(self):
        """Dropping s brings r back under cap_in, so q -> r survives."""
        topo = make_topology(
            {"h1": 100},
            {"s": ("h1", 5, 10), "q": ("h1", 10, 10), "r": ("h1", 10, 8)},
        )
        txns = [txn("a", "s", "r", 6), txn("b", "q", "r", 4)]
        result = validate_inputs(topo, txns)
        assert result.kept == (txns[1],)
        assert result.rejected_users == (("s", OUTGOING_CAPACITY),)

    def test_hubs_are_not_checked(self, crossing_topology, crossing_transactions):
        """Hubs have no client channel to exhaust."""
        kept = validate_inputs(crossing_topology, crossing_transactions).kept
        assert kept == tuple(crossing_transactions)

    def test_fixed_point_is_sound(self):
        """Survivors stay strictly below both capacities on random instances."""
        rng = np.random.default_rng(41)
        for _ in range(200):
            topo, txns = random_instance(rng, max_balance=15)
            kept = validate_inputs(topo, txns).kept
            outgoing, incoming = client_totals(kept)
            for client, channel in topo.clients.items():
                assert outgoing.get(client, 0) < channel.cap_out or client not in outgoing
                assert incoming.get(client, 0) < channel.cap_in or client not in incoming

    def test_order_independent(self):
        """Shuffling the submissions changes neither survivors nor rejections."""
        rng = np.random.default_rng(43)
        for _ in range(100):
            topo, txns = random_instance(rng, max_balance=15)
            shuffled = [txns[i] for i in rng.permutation(len(txns))]
            first, second = validate_inputs(topo, txns), validate_inputs(topo, shuffled)
            assert set(first.kept) == set(second.kept)
            assert set(first.rejected_users) == set(second.rejected_users)


@pytest.fixture
def crossing_run(crossing_topology, crossing_transactions):
    """Honest flow computation on the three-payment example."""
    config = ProtocolConfig(2, pad_to=2)
    return run_flow_computation(crossing_topology, crossing_transactions, config)


def _validate_one(topo, txns, views, user):
    own = [t for t in txns if t.sender == user]
    return local_validate(user, views[user], own, PeerData.from_topology(topo, views))


class TestLocalValidate:
    """Tests for local_validate."""

    def test_honest_views_pass(self, crossing_topology, crossing_transactions, crossing_run):
        """Every user accepts the honest output."""
        results = validate_views(crossing_topology, crossing_transactions, crossing_run.views)
        assert all(r.ok for r in results.values())
        assert {r.label for r in results.values()} == {"Ok"}

    def test_inserted_transaction(self, crossing_topology, crossing_transactions, crossing_run):
        """A transaction the user never sent is caught first."""
        views = dict(crossing_run.views)
        view = views["v4"]
        forged = RestrictedTxn("t9", 3, "sender", "v6")
        views["v4"] = replace(view, restricted_txns=view.restricted_txns + (forged,))
        result = _validate_one(crossing_topology, crossing_transactions, views, "v4")
        assert result.reason == AbortReason.NOT_SUBMITTED

    def test_view_copy_perturbed(self, crossing_topology, crossing_transactions, crossing_run):
        """An edge value that disagrees with the counterparty's copy."""
        views = dict(crossing_run.views)
        views["v4"] = replace(views["v4"], incident_flow={"channel:v4": 11})
        result = _validate_one(crossing_topology, crossing_transactions, views, "v4")
        assert result.reason == AbortReason.FLOW_MISMATCH

    def test_flow_perturbed(self, crossing_topology, crossing_transactions, crossing_run):
        """Adding 1 to a flow entry breaks the net-flow equation."""
        selected = list(crossing_run.selected)
        views = build_views(crossing_topology, selected, Flow({"v1": 10, "v4": 11}, (0, 0)))
        results = validate_views(crossing_topology, crossing_transactions, views)
        assert results["v4"].reason == AbortReason.NET_FLOW_VIOLATION
        assert results["v3"].reason == AbortReason.NET_FLOW_VIOLATION
        assert results["v1"].ok

    def test_counterparty_missing_transaction(
        self, crossing_topology, crossing_transactions, crossing_run
    ):
        """The sender aborts when the recipient's view lacks the transaction."""
        views = dict(crossing_run.views)
        view = views["v3"]
        kept = tuple(r for r in view.restricted_txns if r.txn_id != "t1")
        views["v3"] = replace(view, restricted_txns=kept)
        result = _validate_one(crossing_topology, crossing_transactions, views, "v1")
        assert result.reason == AbortReason.ENDPOINT_MISMATCH

    def test_non_incident_edge(self, crossing_topology, crossing_transactions, crossing_run):
        """A client never sees another client's channel."""
        views = dict(crossing_run.views)
        flow = dict(views["v4"].incident_flow, **{"channel:v2": 0})
        views["v4"] = replace(views["v4"], incident_flow=flow)
        result = _validate_one(crossing_topology, crossing_transactions, views, "v4")
        assert result.reason == AbortReason.FLOW_MISMATCH

    def test_misaddressed_view(self, crossing_topology, crossing_transactions, crossing_run):
        """A view meant for someone else is rejected."""
        views = dict(crossing_run.views)
        views["v2"] = replace(views["v2"], user="v5")
        result = _validate_one(crossing_topology, crossing_transactions, views, "v2")
        assert result.reason == AbortReason.ENDPOINT_MISMATCH

    def test_involved_count_disagrees(self, crossing_topology, crossing_transactions, crossing_run):
        """Peers must agree on how many users are involved."""
        views = dict(crossing_run.views)
        views["v4"] = replace(views["v4"], involved_count=views["v4"].involved_count + 1)
        result = _validate_one(crossing_topology, crossing_transactions, views, "v4")
        assert result.reason == AbortReason.ENDPOINT_MISMATCH

    def test_uninvolved_user_passes(self, crossing_topology, crossing_transactions, crossing_run):
        """An empty view validates trivially."""
        assert _validate_one(crossing_topology, crossing_transactions, crossing_run.views, "v2").ok


def _mutations(view):
    """Every single-field change of a view."""
    for edge, value in view.incident_flow.items():
        yield replace(view, incident_flow={**view.incident_flow, edge: value + 1})
        yield replace(view, incident_flow={**view.incident_flow, edge: value - 1})
    for i, r in enumerate(view.restricted_txns):
        rest = view.restricted_txns[:i] + view.restricted_txns[i + 1 :]
        flipped = "recipient" if r.role == "sender" else "sender"
        for changed in (replace(r, amount=r.amount + 1), replace(r, role=flipped)):
            yield replace(view, restricted_txns=rest[:i] + (changed,) + rest[i:])
        yield replace(view, restricted_txns=rest)
    yield replace(view, involved_count=view.involved_count + 1)


class TestMutationsAbort:
    """Any single-field mutation of one view makes some user abort."""

    def test_random_runs(self):
        """Fuzz every mutation of every involved view over random runs."""
        rng = np.random.default_rng(47)
        checked = 0
        for _ in range(25):
            topo, txns = random_instance(rng, max_txns=8)
            counts: dict[str, int] = {}
            for t in txns:
                counts[t.sender] = counts.get(t.sender, 0) + 1
            config = ProtocolConfig(1, pad_to=max(counts.values(), default=0))
            run = run_flow_computation(topo, txns, config)
            assert all(r.ok for r in validate_views(topo, txns, run.views).values())
            for user, view in run.views.items():
                if view.is_empty():
                    continue
                for mutated in _mutations(view):
                    views = {**run.views, user: mutated}
                    results = validate_views(topo, txns, views)
                    assert not all(r.ok for r in results.values()), (user, mutated)
                    checked += 1
        assert checked > 100
