from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from orbit_mesh.clock import ManualClock
from orbit_mesh.dispatcher import Dispatcher, DispatcherConfig
from orbit_mesh.dispatcher.eventlog import read_events
from orbit_mesh.dispatcher.logcheck import check_events, check_log_file, terminal_counts
from orbit_mesh.dispatcher.model import TERMINAL_STATUSES, Outcome, TaskStatus


def drive_random_schedule(d: Dispatcher, clock: ManualClock, rng: random.Random, steps: int):
    """Random but always-legal op schedule: the generator for invariant tests."""
    workers = []
    for i in range(3):
        wid = f"w{i}"
        d.register_worker(wid, {"ad", "other"} if i % 2 == 0 else {"ad"}, {"j"})
        workers.append(wid)
    live_claims: dict[str, str] = {}  # task_id -> worker_id
    for _ in range(steps):
        op = rng.choice(["enqueue", "claim", "complete", "reap", "tick", "heartbeat"])
        if op == "enqueue":
            d.enqueue(rng.choice(["ad", "other"]), "j", b"x")
        elif op == "claim":
            wid = rng.choice(workers)
            namespaces = {"ad"} if wid == "w1" else rng.choice([{"ad"}, {"other"}, {"ad", "other"}])
            try:
                task = d.claim(wid, namespaces)
            except Exception:
                task = None
            if task is not None:
                live_claims[task.task_id] = wid
        elif op == "complete" and live_claims:
            task_id = rng.choice(sorted(live_claims))
            wid = live_claims.pop(task_id)
            try:
                d.complete(wid, task_id, rng.choice([Outcome.SUCCEEDED, Outcome.FAILED]), b"r")
            except Exception:
                pass  # lease may have expired meanwhile
        elif op == "reap":
            for tid in d.reap().expired_tasks:
                live_claims.pop(tid, None)
        elif op == "tick":
            clock.advance(rng.choice([1.0, 5.0, 40.0]))
            for wid in workers:
                d.heartbeat(wid)
        else:
            d.heartbeat(rng.choice(workers))
    d.reap()


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_random_schedules_admit_valid_linearization(seed):
    clock = ManualClock(0.0)
    d = Dispatcher(DispatcherConfig(), clock=clock)
    drive_random_schedule(d, clock, random.Random(seed), steps=120)
    assert check_events(d.event_log.events, max_attempts=d.config.max_attempts) == []
    # exactly-once: every terminal task has exactly one result entry
    counts = terminal_counts(d.event_log.events)
    assert all(c == 1 for c in counts.values())
    stats = d.stats()
    terminal = sum(stats["by_status"].get(s.value, 0) for s in TERMINAL_STATUSES)
    assert stats["results"] == terminal == len(counts)


def test_event_log_replay_restores_state(tmp_path):
    log_path = tmp_path / "dispatcher.log"
    clock = ManualClock(0.0)
    d = Dispatcher(DispatcherConfig(event_log_path=str(log_path)), clock=clock)
    drive_random_schedule(d, clock, random.Random(7), steps=150)
    before = d.stats()
    task_ids = [e["task_id"] for e in read_events(log_path) if e["type"] == "enqueue"]
    tasks_before = {tid: d.task(tid).to_dict() for tid in task_ids}
    d.close()

    revived = Dispatcher(DispatcherConfig(event_log_path=str(log_path)), clock=clock)
    assert revived.stats() == before
    for tid, want in tasks_before.items():
        assert revived.task(tid).to_dict() == want


def test_replayed_dispatcher_continues_correctly(tmp_path):
    log_path = tmp_path / "dispatcher.log"
    clock = ManualClock(0.0)
    d = Dispatcher(DispatcherConfig(event_log_path=str(log_path)), clock=clock)
    d.register_worker("w1", {"ad"}, {"j"})
    first = d.enqueue("ad", "j", b"1")
    second = d.enqueue("ad", "j", b"2")
    assert d.claim("w1", {"ad"}).task_id == first
    d.complete("w1", first, Outcome.SUCCEEDED, b"done-1")
    d.close()

    revived = Dispatcher(DispatcherConfig(event_log_path=str(log_path)), clock=clock)
    assert revived.get_result(first).result_payload == b"done-1"
    assert revived.task(second).status is TaskStatus.QUEUED
    clock.advance(1.0)
    revived.heartbeat("w1")
    assert revived.claim("w1", {"ad"}).task_id == second
    revived.complete("w1", second, Outcome.SUCCEEDED, b"done-2")
    revived.close()
    assert check_log_file(log_path) == []


# -- the checker must actually catch violations --------------------------------

def _base_events():
    return [
        {"seq": 1, "ts": 0.0, "type": "register", "worker_id": "w1", "namespaces": ["ad"], "jobs": ["j"]},
        {"seq": 2, "ts": 0.0, "type": "register", "worker_id": "w2", "namespaces": ["ad"], "jobs": ["j"]},
        {"seq": 3, "ts": 1.0, "type": "enqueue", "task_id": "t1", "namespace": "ad",
         "job_name": "j", "payload_b64": "", "dataset_id": None},
    ]


def test_checker_flags_double_lease():
    events = _base_events() + [
        {"seq": 4, "ts": 2.0, "type": "claim", "task_id": "t1", "worker_id": "w1",
         "namespace": "ad", "lease_deadline": 62.0, "attempts": 0},
        {"seq": 5, "ts": 3.0, "type": "claim", "task_id": "t1", "worker_id": "w2",
         "namespace": "ad", "lease_deadline": 63.0, "attempts": 0},
    ]
    assert any("double lease" in v for v in check_events(events))


def test_checker_flags_namespace_breach():
    events = _base_events() + [
        {"seq": 4, "ts": 1.5, "type": "enqueue", "task_id": "t2", "namespace": "other",
         "job_name": "j", "payload_b64": "", "dataset_id": None},
        {"seq": 5, "ts": 2.0, "type": "claim", "task_id": "t2", "worker_id": "w1",
         "namespace": "other", "lease_deadline": 62.0, "attempts": 0},
    ]
    assert any("isolation breach" in v for v in check_events(events))


def test_checker_flags_duplicate_terminal():
    events = _base_events() + [
        {"seq": 4, "ts": 2.0, "type": "claim", "task_id": "t1", "worker_id": "w1",
         "namespace": "ad", "lease_deadline": 62.0, "attempts": 0},
        {"seq": 5, "ts": 3.0, "type": "complete", "task_id": "t1", "worker_id": "w1",
         "outcome": "Succeeded", "result_b64": ""},
        {"seq": 6, "ts": 4.0, "type": "complete", "task_id": "t1", "worker_id": "w1",
         "outcome": "Succeeded", "result_b64": ""},
    ]
    violations = check_events(events)
    assert any("terminal states" in v for v in violations)


def test_checker_flags_fifo_breach():
    events = _base_events() + [
        {"seq": 4, "ts": 2.0, "type": "enqueue", "task_id": "t2", "namespace": "ad",
         "job_name": "j", "payload_b64": "", "dataset_id": None},
        {"seq": 5, "ts": 3.0, "type": "claim", "task_id": "t2", "worker_id": "w1",
         "namespace": "ad", "lease_deadline": 63.0, "attempts": 0},
        {"seq": 6, "ts": 4.0, "type": "claim", "task_id": "t1", "worker_id": "w2",
         "namespace": "ad", "lease_deadline": 64.0, "attempts": 0},
    ]
    assert any("FIFO breach" in v for v in check_events(events))


def test_checker_flags_wrong_completer():
    events = _base_events() + [
        {"seq": 4, "ts": 2.0, "type": "claim", "task_id": "t1", "worker_id": "w1",
         "namespace": "ad", "lease_deadline": 62.0, "attempts": 0},
        {"seq": 5, "ts": 3.0, "type": "complete", "task_id": "t1", "worker_id": "w2",
         "outcome": "Succeeded", "result_b64": ""},
    ]
    assert any("lease held by" in v for v in check_events(events))


def test_checker_passes_clean_history():
    events = _base_events() + [
        {"seq": 4, "ts": 2.0, "type": "claim", "task_id": "t1", "worker_id": "w1",
         "namespace": "ad", "lease_deadline": 62.0, "attempts": 0},
        {"seq": 5, "ts": 3.0, "type": "complete", "task_id": "t1", "worker_id": "w1",
         "outcome": "Succeeded", "result_b64": ""},
    ]
    assert check_events(events) == []
