"""Acceptance suite: one test per criterion, each printing a PASS line.

Scale-out, end-to-end, and durability criteria run the real CLIs as separate
OS processes over real sockets; simulated-clock criteria drive the core state
machines directly so time is exact.
"""

from __future__ import annotations

import json
import random
import threading
import time

import httpx
import pytest

from orbit_mesh.clock import ManualClock
from orbit_mesh.ctm.client import CtmClient
from orbit_mesh.ctm.service import ClinicalTaskManager
from orbit_mesh.dispatcher import Dispatcher, DispatcherConfig
from orbit_mesh.dispatcher.client import DispatcherClient
from orbit_mesh.dispatcher.eventlog import read_events
from orbit_mesh.dispatcher.logcheck import check_events, terminal_counts
from orbit_mesh.dispatcher.model import Outcome, TaskStatus
from orbit_mesh.edgesim import ParticipantScript, run_cohort
from orbit_mesh.storage.paths import open_storage
from orbit_mesh.storage.tables import verify_integrity

from helpers import COOKIE_THEFT_TEXT, ad_study_doc, cohort_doc
from service_harness import Platform
from test_ad_pipeline import oracle_features, random_text

ECHO_MANIFEST = {"jobs": [{"job_name": "echo",
                           "entry_point": "orbit_mesh.worker.demojobs:echo"}]}
AD_MANIFEST = {"jobs": [{"job_name": "ad_assess",
                         "entry_point": "orbit_mesh.ad_pipeline.jobs:make_ad_assess",
                         "options": {}}]}


def _pass(name: str) -> None:
    print(f"\nACCEPTANCE PASS: {name}")


# -- 1. exactly-once under scale-out ------------------------------------------------

def test_exactly_once_under_scale_out(tmp_path):
    n_tasks = 1000
    with Platform(tmp_path / "platform") as platform:
        workers = []
        for i in range(4):
            workers.append(platform.worker(f"w-ad-{i}", ["ad"], ECHO_MANIFEST).start())
        for i in range(4):
            workers.append(platform.worker(f"w-other-{i}", ["other"], ECHO_MANIFEST).start())
        client = DispatcherClient(platform.dispatcher_url)
        started = time.time()

        def enqueue_block(namespace: str, count: int):
            local = DispatcherClient(platform.dispatcher_url)
            for i in range(count):
                local.enqueue(namespace, "echo", json.dumps({"i": i}).encode())
            local.close()

        threads = [threading.Thread(target=enqueue_block, args=(ns, n_tasks // 4))
                   for ns in ("ad", "ad", "other", "other")]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

        deadline = started + 60.0
        while time.time() < deadline:
            stats = client.stats()
            if stats["results"] >= n_tasks:
                break
            time.sleep(0.2)
        elapsed = time.time() - started
        stats = client.stats()
        client.close()
        for w in workers:
            w.stop()
    assert stats["results"] == n_tasks, f"only {stats['results']} results after 60s"
    assert stats["by_status"] == {"Succeeded": n_tasks}
    assert elapsed < 60.0

    events = read_events(tmp_path / "platform" / "dispatcher.events")
    violations = check_events(events, max_attempts=2)
    assert violations == [], violations[:10]
    counts = terminal_counts(events)
    assert len(counts) == n_tasks
    assert all(c == 1 for c in counts.values())  # exactly one terminal state each
    _pass(f"exactly-once under scale-out: {n_tasks} tasks, 8 worker processes, "
          f"{elapsed:.1f}s, zero double-lease violations")


# -- 2. failure recovery --------------------------------------------------------------

def test_failure_recovery_requeue_and_expiry():
    clock = ManualClock(0.0)
    config = DispatcherConfig(lease_ttl_s=60.0, reap_interval_s=5.0, max_attempts=2)
    d = Dispatcher(config, clock=clock)
    d.register_worker("w1", {"ad"}, {"j"})
    d.register_worker("w2", {"ad"}, {"j"})
    task_ids = [d.enqueue("ad", "j", f"{i}".encode()) for i in range(10)]

    killed_task = d.claim("w1", {"ad"})  # w1 dies mid-task: never completes
    for tid in task_ids:
        if tid == killed_task.task_id:
            continue
        claimed = d.claim("w2", {"ad"})
        d.complete("w2", claimed.task_id, Outcome.SUCCEEDED, b"ok")
        clock.advance(0.5)
        d.heartbeat("w2")

    # requeued by the first reap tick after the lease runs out
    reap_at = killed_task.lease_deadline + config.reap_interval_s
    clock.set(reap_at)
    report = d.reap()
    assert killed_task.task_id in report.expired_tasks
    record = d.task(killed_task.task_id)
    assert record.status is TaskStatus.QUEUED
    assert record.attempts == 1

    d.heartbeat("w2")
    reclaimed = d.claim("w2", {"ad"})
    assert reclaimed.task_id == killed_task.task_id
    d.complete("w2", reclaimed.task_id, Outcome.SUCCEEDED, b"ok")
    stats = d.stats()
    assert stats["by_status"]["Succeeded"] == 10  # final success count unchanged

    # force one task past max_attempts: it must end Expired with a Failed entry
    doomed = d.enqueue("ad", "j", b"doomed")
    for _ in range(config.max_attempts + 1):
        d.heartbeat("w2")
        claimed = d.claim("w2", {"ad"})
        assert claimed.task_id == doomed
        clock.set(claimed.lease_deadline + 1.0)
        d.reap()
    record = d.task(doomed)
    assert record.status is TaskStatus.EXPIRED
    assert record.attempts == config.max_attempts + 1
    entry = d.get_result(doomed)
    assert entry.outcome is Outcome.FAILED
    assert b"lease expired" in entry.result_payload
    assert check_events(d.event_log.events, max_attempts=2) == []
    _pass("failure recovery: requeue within one reap interval, success count "
          "unchanged, over-limit task Expired with Failed result")


# -- 3. namespace isolation ------------------------------------------------------------

def test_namespace_isolation_randomized_interleavings():
    clock = ManualClock(0.0)
    d = Dispatcher(DispatcherConfig(), clock=clock)
    ad_workers = [f"w-ad-{i}" for i in range(3)]
    other_workers = [f"w-other-{i}" for i in range(3)]
    for w in ad_workers:
        d.register_worker(w, {"ad"}, {"j"})
    for w in other_workers:
        d.register_worker(w, {"other"}, {"j"})

    rng = random.Random(20_240_101)
    ops = 0
    cross_claims = 0
    for _ in range(10_000):
        ops += 1
        if rng.random() < 0.5:
            d.enqueue(rng.choice(["ad", "other"]), "j", b"x")
        else:
            if rng.random() < 0.5:
                worker, namespace = rng.choice(ad_workers), "ad"
            else:
                worker, namespace = rng.choice(other_workers), "other"
            task = d.claim(worker, {namespace})
            if task is not None and task.namespace != namespace:
                cross_claims += 1
        if rng.random() < 0.02:
            clock.advance(1.0)
            for w in ad_workers + other_workers:
                d.heartbeat(w)

    assert ops == 10_000
    assert cross_claims == 0
    violations = check_events(d.event_log.events, max_attempts=2)
    assert violations == [], violations[:10]
    claim_events = [e for e in d.event_log.events if e["type"] == "claim"]
    assert claim_events, "schedule produced no claims"
    for event in claim_events:
        expected = "ad" if event["worker_id"].startswith("w-ad-") else "other"
        assert event["namespace"] == expected
    _pass(f"namespace isolation: 10,000 randomized interleavings, "
          f"{len(claim_events)} claims, zero cross-namespace deliveries")


# -- 4. end-to-end flow replay ----------------------------------------------------------

def test_end_to_end_cohort_replay(tmp_path):
    started = time.time()
    scripts_dir = tmp_path / "fixtures"
    scripts_dir.mkdir()
    texts = {
        "p1": COOKIE_THEFT_TEXT,
        "p2": COOKIE_THEFT_TEXT + ". the mother is washing dishes",
        "p3": "the water overflows from the sink while the boy takes cookies",
        "p4": COOKIE_THEFT_TEXT + ". the girl reaches for a cookie",
        "p5": "a boy on a stool. a jar of cookies. the sink overflowing with water",
    }
    for pid, text in texts.items():
        (scripts_dir / f"{pid}.txt").write_text(text)

    with Platform(tmp_path / "platform") as platform:
        worker = platform.worker("w-ad", ["ad"], AD_MANIFEST, storage=True).start()
        ctm = CtmClient(platform.ctm_url)
        ctm.create_cohort(cohort_doc(n=5))
        study = ad_study_doc(schedule={"mode": "Once"})
        ctm.create_study(study)
        ctm.activate_study(study["study_id"])

        scripts = [
            ParticipantScript(
                participant_id=pid,
                responses={"td-ad": {
                    "answers": [{"prompt_id": "q-gender",
                                 "value": "Female" if i % 2 else "Male"}],
                    "attachment_files": [str(scripts_dir / f"{pid}.txt")],
                }})
            for i, pid in enumerate(sorted(texts))
        ]
        assert ParticipantScript(participant_id="defaults").poll_interval_s == 10.0

        report = run_cohort(scripts, ctm_url=platform.ctm_url,
                            gateway_url=platform.gateway_url, duration_s=90.0,
                            poll_interval_override=0.2, idle_rounds_to_exit=3)
        progress = ctm.study_progress(study["study_id"])
        ctm.close()
        worker.stop()

        store, blobs = open_storage(platform.data_root)
        datasets = store.list_datasets()
        confidences = []
        for dataset_id in datasets:
            bundle = store.query_by_dataset(dataset_id)
            assert len(bundle["raw"].blob_refs) == 1
            assert blobs.get_blob(bundle["raw"].blob_refs[0].url)[1] == "text/plain"
            assert len(bundle["results"]) == 1
            assert bundle["results"][0].dataset_id == dataset_id
            confidences.append(bundle["results"][0].result["confidence_score"])
        assert verify_integrity(store, blobs) == []
        store.close()

    for pid in texts:
        row = report.row(pid)
        assert row.uploads == 1, row.errors
        assert row.results_received == 1, row.errors
        assert row.errors == []
    assert len(datasets) == 5
    assert all(-1.0 <= c <= 1.0 for c in confidences)
    assert progress["totals"]["completed"] == 5
    elapsed = time.time() - started
    assert elapsed < 120.0
    _pass(f"end-to-end cohort replay: 5 uploads, 5 joinable results, all "
          f"confidence scores in [-1, 1], default poll interval 10s, {elapsed:.1f}s")


# -- 5. feature oracle equivalence -------------------------------------------------------

def test_feature_oracle_equivalence():
    from orbit_mesh.ad_pipeline import ICULexicon, extract_features, preprocess

    lexicon = ICULexicon.load()
    rep = preprocess(COOKIE_THEFT_TEXT)
    features = extract_features(rep, lexicon)
    assert features.word_count == 16
    assert features.unique_word_count == 12
    assert features.type_token_ratio == pytest.approx(0.75)
    assert features.icu_count == 6

    rng = random.Random(777)
    for _ in range(1000):
        rep = preprocess(random_text(rng))
        assert extract_features(rep, lexicon).to_dict() == oracle_features(rep, lexicon)
    _pass("feature oracle equivalence: fixture (16/12/0.75/6) and 1000 random "
          "token sequences, exact")


# -- 6. score math ------------------------------------------------------------------------

def test_score_math():
    from orbit_mesh.ad_pipeline.features import FeatureVector
    from orbit_mesh.ad_pipeline.jobs import DEFAULT_CONFIGS, AssessmentPipeline
    from orbit_mesh.ad_pipeline.scoring import ScoringConfig, score
    from test_ad_pipeline import REFERENCE, FakeCtx, random_feature_vector

    for p, expected in [(0.0, 1.0), (0.5, 0.0), (0.75, -0.5), (1.0, -1.0)]:
        assert 1.0 - 2.0 * p == expected

    neutral = ScoringConfig(mode="Classification", feature_order=["type_token_ratio"],
                            weights=[0.0], bias=0.0)
    assert score(FeatureVector(), neutral, REFERENCE).confidence_score == 0.0

    rng = random.Random(31337)
    classification = ScoringConfig.load(DEFAULT_CONFIGS["Classification"])
    mmse = ScoringConfig.load(DEFAULT_CONFIGS["MMSE"])
    onset = ScoringConfig.load(DEFAULT_CONFIGS["Onset85"])
    for _ in range(10_000):
        fv = random_feature_vector(rng)
        assert -1.0 <= score(fv, classification).confidence_score <= 1.0
        assert 0 <= score(fv, mmse).mmse_estimate <= 30
        assert 0.0 <= score(fv, onset).onset_probability <= 1.0

    ctx = FakeCtx({"blob://raw-data/x/t.txt": (COOKIE_THEFT_TEXT.encode(), "text/plain")})
    payload = {"dataset_id": "d", "answers": [], "blob_urls": ["blob://raw-data/x/t.txt"]}
    feature_dicts = [
        AssessmentPipeline(DEFAULT_CONFIGS[mode]).handle(payload, ctx)["features"]
        for mode in ("Classification", "MMSE", "Onset85")
    ]
    assert feature_dicts[0] == feature_dicts[1] == feature_dicts[2]
    _pass("score math: 1-2p anchors, 10,000-sample range property, MMSE clamp, "
          "shared features across all three modes")


# -- 7. storage durability ------------------------------------------------------------------

def test_storage_durability_across_service_restart(tmp_path):
    platform = Platform(tmp_path / "platform")
    platform.start()
    try:
        worker = platform.worker("w-ad", ["ad"], AD_MANIFEST, storage=True).start()
        ctm = CtmClient(platform.ctm_url)
        ctm.create_cohort(cohort_doc(n=1))
        study = ad_study_doc(schedule={"mode": "Once"})
        ctm.create_study(study)
        ctm.activate_study(study["study_id"])
        bundle = ctm.due_assignments("p1")[0]
        ctm.close()

        package = {
            "participant_id": "p1", "study_id": study["study_id"],
            "task_definition_id": "td-ad",
            "assignment_id": bundle["assignment"]["assignment_id"],
            "started_at": time.time(), "completed_at": time.time(),
            "answers": [{"prompt_id": "q-gender", "value": "Male"}],
        }
        resp = httpx.post(f"{platform.gateway_url}/api/v1/ingress", files=[
            ("package", (None, json.dumps(package), "application/json")),
            ("attachment", ("cookie.txt", COOKIE_THEFT_TEXT.encode(), "text/plain")),
        ], timeout=30.0)
        assert resp.status_code == 201
        receipt = resp.json()
        task_id = receipt["task_ids"][0]

        deadline = time.time() + 60.0
        result_bytes = None
        while time.time() < deadline:
            poll = httpx.get(f"{platform.gateway_url}/api/v1/results/{task_id}",
                             timeout=10.0)
            if poll.status_code == 200:
                result_bytes = poll.content
                break
            time.sleep(0.2)
        assert result_bytes is not None, "no result before restart"
        worker.stop()

        store, blobs = open_storage(platform.data_root)
        before_raw = store.query_by_dataset(receipt["dataset_id"])["raw"].to_dict()
        before_results = [r.to_dict() for r in
                          store.query_by_dataset(receipt["dataset_id"])["results"]]
        blob_url = before_raw["blob_refs"][0]["url"]
        before_blob = blobs.get_blob(blob_url)[0]
        store.close()

        platform.stop()  # all services down mid-suite
        platform.start()

        poll = httpx.get(f"{platform.gateway_url}/api/v1/results/{task_id}", timeout=10.0)
        assert poll.status_code == 200
        assert poll.content == result_bytes  # dispatcher replayed its event log

        store, blobs = open_storage(platform.data_root)
        after = store.query_by_dataset(receipt["dataset_id"])
        assert after["raw"].to_dict() == before_raw
        assert [r.to_dict() for r in after["results"]] == before_results
        assert blobs.get_blob(blob_url)[0] == before_blob
        assert verify_integrity(store, blobs) == []
        store.close()

        ctm = CtmClient(platform.ctm_url)
        progress = ctm.study_progress(study["study_id"])
        assert progress["totals"]["completed"] == 1
        ctm.close()
    finally:
        platform.stop()
    _pass("storage durability: every acknowledged blob, row, and result read "
          "byte-identical after full service restart; integrity sweep clean")


# -- 8. schedule semantics ---------------------------------------------------------------------

def test_schedule_semantics_weekly_three_weeks():
    from datetime import datetime, timezone

    def utc(y, mo, d, h=0, mi=0) -> float:
        return datetime(y, mo, d, h, mi, tzinfo=timezone.utc).timestamp()

    clock = ManualClock(utc(2024, 1, 1, 8, 0))  # Monday
    ctm = ClinicalTaskManager(clock=clock)
    ctm.create_cohort(cohort_doc(n=5))
    doc = ad_study_doc(schedule={"mode": "Weekly", "at_time": "09:00", "weekday": 0})
    ctm.create_study(doc)
    ctm.activate_study(doc["study_id"])

    end = utc(2024, 1, 22, 8, 0)
    t = clock.now()
    while t < end:
        t = min(t + 4 * 3600, end)
        clock.set(t)
        for _ in range(3):  # replaying ticks must stay idempotent
            ctm.tick()

    per_participant: dict[str, list[float]] = {}
    for a in ctm.assignments_for_study(doc["study_id"]):
        per_participant.setdefault(a.participant_id, []).append(a.due_at)
    assert set(per_participant) == {f"p{i}" for i in range(1, 6)}
    expected = [utc(2024, 1, 1, 9, 0), utc(2024, 1, 8, 9, 0), utc(2024, 1, 15, 9, 0)]
    for dues in per_participant.values():
        assert sorted(dues) == expected  # exactly 3 per participant
    _pass("schedule semantics: weekly study over a simulated 3-week clock gives "
          "exactly 3 assignments per participant, idempotent under tick replay")
