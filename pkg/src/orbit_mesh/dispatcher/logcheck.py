"""Event-log consistency checker.

Replays a dispatcher event log as a sequential history and reports every rule
violation. Written independently of the dispatcher's own transition code so it
can serve as the oracle for concurrency and isolation tests: if the log admits
no violation, it is a valid linearization of the observed operations.

Checked rules:
  * lifecycle legality: tasks move Queued -> Claimed -> (Succeeded|Failed) or
    back to Queued via requeue, ending Expired after too many attempts
  * no double-lease: a claim is legal only while the task is Queued
  * exactly-once terminal state and at most one result entry per task
  * namespace isolation: a worker only claims tasks in namespaces it declared,
    and a task is only claimed in the namespace it was enqueued in
  * FIFO per namespace among tasks claimed without any prior requeue
  * attempts bound: attempts never exceeds max_attempts; a task is claimed at
    most max_attempts + 1 times
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

from orbit_mesh.dispatcher.eventlog import read_events

TERMINAL = ("complete", "expire")


def check_events(events: list[dict], max_attempts: int = 2) -> list[str]:
    violations: list[str] = []
    worker_namespaces: dict[str, set[str]] = {}
    task_namespace: dict[str, str] = {}
    task_state: dict[str, str] = {}           # queued | claimed | terminal
    task_holder: dict[str, str] = {}
    task_requeues: dict[str, int] = defaultdict(int)
    task_claims: dict[str, int] = defaultdict(int)
    results_seen: dict[str, int] = defaultdict(int)
    namespace_enqueues: dict[str, list[str]] = defaultdict(list)
    fifo_rank: dict[str, int] = {}

    def build_fifo_ranks() -> None:
        # enqueue order = log order: the log is the serialized history
        for namespace, ids in namespace_enqueues.items():
            for rank, task_id in enumerate(ids):
                fifo_rank[task_id] = rank

    # first pass: collect enqueue ordering, validate transitions
    pending_fifo_claims: dict[str, list[str]] = defaultdict(list)

    for event in events:
        kind = event["type"]
        seq = event.get("seq", "?")
        if kind == "register":
            worker_namespaces[event["worker_id"]] = set(event["namespaces"])
        elif kind == "enqueue":
            task_id = event["task_id"]
            if task_id in task_state:
                violations.append(f"seq {seq}: task {task_id} enqueued twice")
                continue
            task_state[task_id] = "queued"
            task_namespace[task_id] = event["namespace"]
            namespace_enqueues[event["namespace"]].append(task_id)
        elif kind == "claim":
            task_id = event["task_id"]
            worker_id = event["worker_id"]
            state = task_state.get(task_id)
            if state is None:
                violations.append(f"seq {seq}: claim of unknown task {task_id}")
                continue
            if state == "claimed":
                violations.append(
                    f"seq {seq}: double lease on {task_id} (held by "
                    f"{task_holder.get(task_id)}, claimed again by {worker_id})")
            elif state == "terminal":
                violations.append(f"seq {seq}: claim of terminal task {task_id}")
            declared = worker_namespaces.get(worker_id)
            if declared is None:
                violations.append(f"seq {seq}: claim by unregistered worker {worker_id}")
            elif event["namespace"] not in declared:
                violations.append(
                    f"seq {seq}: isolation breach: worker {worker_id} claimed in "
                    f"namespace {event['namespace']} it never declared")
            if task_namespace.get(task_id) != event["namespace"]:
                violations.append(
                    f"seq {seq}: task {task_id} enqueued in {task_namespace.get(task_id)} "
                    f"but claimed in {event['namespace']}")
            task_state[task_id] = "claimed"
            task_holder[task_id] = worker_id
            task_claims[task_id] += 1
            if task_requeues[task_id] == 0:
                pending_fifo_claims[event["namespace"]].append(task_id)
        elif kind == "complete":
            task_id = event["task_id"]
            state = task_state.get(task_id)
            if state != "claimed":
                violations.append(f"seq {seq}: complete of task {task_id} in state {state}")
            elif task_holder.get(task_id) != event["worker_id"]:
                violations.append(
                    f"seq {seq}: complete of {task_id} by {event['worker_id']} "
                    f"but lease held by {task_holder.get(task_id)}")
            task_state[task_id] = "terminal"
            results_seen[task_id] += 1
        elif kind == "requeue":
            task_id = event["task_id"]
            if task_state.get(task_id) != "claimed":
                violations.append(
                    f"seq {seq}: requeue of task {task_id} in state {task_state.get(task_id)}")
            task_state[task_id] = "queued"
            task_holder.pop(task_id, None)
            task_requeues[task_id] += 1
            if event["attempts"] > max_attempts:
                violations.append(
                    f"seq {seq}: requeue of {task_id} with attempts {event['attempts']} "
                    f"> max_attempts {max_attempts}")
        elif kind == "expire":
            task_id = event["task_id"]
            if task_state.get(task_id) != "claimed":
                violations.append(
                    f"seq {seq}: expire of task {task_id} in state {task_state.get(task_id)}")
            task_state[task_id] = "terminal"
            results_seen[task_id] += 1
            if event["attempts"] != max_attempts + 1:
                violations.append(
                    f"seq {seq}: expire of {task_id} at attempts {event['attempts']}, "
                    f"expected {max_attempts + 1}")

    # second pass: FIFO among never-requeued claims, per namespace
    build_fifo_ranks()
    for namespace, claimed_ids in pending_fifo_claims.items():
        last_rank = -1
        last_id = None
        for task_id in claimed_ids:
            rank = fifo_rank[task_id]
            if rank < last_rank:
                violations.append(
                    f"FIFO breach in namespace {namespace}: {task_id} "
                    f"(enqueue rank {rank}) claimed after {last_id} (rank {last_rank})")
            last_rank, last_id = rank, task_id

    for task_id, count in results_seen.items():
        if count > 1:
            violations.append(f"task {task_id} reached {count} terminal states")
    for task_id, count in task_claims.items():
        if count > max_attempts + 1:
            violations.append(
                f"task {task_id} claimed {count} times, allowed {max_attempts + 1}")

    return violations


def check_log_file(path: str | Path, max_attempts: int = 2) -> list[str]:
    return check_events(read_events(path), max_attempts=max_attempts)


def terminal_counts(events: list[dict]) -> dict[str, int]:
    """Count terminal events per task (exactly-once checks want the histogram)."""
    counts: dict[str, int] = defaultdict(int)
    for event in events:
        if event["type"] in TERMINAL:
            counts[event["task_id"]] += 1
    return dict(counts)
