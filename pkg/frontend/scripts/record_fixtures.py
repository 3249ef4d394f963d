"""Record live service responses into frontend/tests/fixtures.

The coach console's contract tests assert against the exact bytes the
HTTP service returns, so this script starts a real ``vren serve``
process, replays the console's requests against it, and saves each
response body verbatim.  Rerun after any intentional service change:

    python3 frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import copy
import json
import subprocess
import sys
import time
import urllib.error
import urllib.request
from pathlib import Path

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "tests" / "fixtures"
REPO_ROOT = HERE.parent.parent
GOLDEN = REPO_ROOT / "tests" / "fixtures" / "golden.vren"
MODEL = REPO_ROOT / "tests" / "fixtures" / "goldens" / "winner_model.json"
PORT = 8261
BASE = f"http://127.0.0.1:{PORT}"


def request(method: str, path: str, payload: dict | None = None) -> tuple[int, bytes]:
    req = urllib.request.Request(BASE + path, method=method)
    body = None
    if payload is not None:
        body = json.dumps(payload).encode("utf-8")
        req.add_header("Content-Type", "application/json")
    try:
        with urllib.request.urlopen(req, body, timeout=10) as resp:
            return resp.status, resp.read()
    except urllib.error.HTTPError as err:
        return err.code, err.read()


def record(name: str, status: int, body: bytes, expect_status: int) -> dict:
    if status != expect_status:
        sys.exit(f"{name}: expected HTTP {expect_status}, got {status}: {body[:200]!r}")
    (FIXTURES / name).write_bytes(body)
    print(f"  {name}  ({len(body)} bytes)")
    return json.loads(body)


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    golden_text = GOLDEN.read_text(encoding="utf-8")

    server = subprocess.Popen(
        ["vren", "serve", "--port", str(PORT), "--model", str(MODEL), "--corpus", str(GOLDEN)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    try:
        for _ in range(50):
            time.sleep(0.2)
            try:
                status, _ = request("GET", "/health")
                if status == 200:
                    break
            except OSError:
                continue
        else:
            sys.exit("service did not come up")

        status, body = request("GET", "/health")
        record("health.json", status, body, 200)

        status, body = request("POST", "/parse", {"text": golden_text})
        parsed = record("parse_golden.json", status, body, 200)
        match_doc = parsed["matches"][0]

        status, body = request("POST", "/lint", {"match": match_doc})
        record("lint_clean.json", status, body, 200)

        # The console's edit flow: a coach sets pass_to=12 on a round whose
        # pass rating says out-of-system — lint must flag the mismatch inline.
        mismatch = copy.deepcopy(match_doc)
        rnd = mismatch["rallies"][0]["rounds"][0]
        rnd["pass_rating"] = "out_of_system"
        rnd["pass_to"] = 12
        status, body = request("POST", "/lint", {"match": mismatch})
        doc = record("lint_pass_mismatch.json", status, body, 200)
        codes = {d["code"] for d in doc["diagnostics"]}
        if "W_PASS_RATING_MISMATCH" not in codes:
            sys.exit(f"expected W_PASS_RATING_MISMATCH, got {codes}")

        # An error-severity draft (broken team alternation) for the
        # cannot-submit invariant.
        broken = copy.deepcopy(match_doc)
        rounds = broken["rallies"][0]["rounds"]
        rounds[1]["team"] = rounds[0]["team"]
        status, body = request("POST", "/lint", {"match": broken})
        doc = record("lint_alternation_error.json", status, body, 200)
        if doc["error_count"] == 0:
            sys.exit("expected an error-severity diagnostic")

        status, body = request(
            "POST",
            "/predict/rally",
            {"match": match_doc, "rally_no": 8},
        )
        record("predict_rally8.json", status, body, 200)

        whatif_base = {"match": match_doc, "rally_no": 8, "round_index": 1,
                       "field": "set_location"}
        status, body = request("POST", "/whatif", {**whatif_base, "value": "quick"})
        record("whatif_dball_quick.json", status, body, 200)

        status, body = request("POST", "/whatif", {**whatif_base, "value": "d_ball"})
        doc = record("whatif_identity.json", status, body, 200)
        if doc["delta"] != 0:
            sys.exit(f"identity perturbation returned delta {doc['delta']}")

        status, body = request("POST", "/whatif", {**whatif_base, "value": "banana"})
        record("whatif_error_enum.json", status, body, 400)

        status, body = request(
            "POST",
            "/whatif",
            {"match": match_doc, "rally_no": 8, "round_index": 1,
             "field": "serve_type", "value": "float"},
        )
        doc = record("whatif_error_perturbation.json", status, body, 400)
        if doc["code"] != "E_INVALID_PERTURBATION":
            sys.exit(f"expected E_INVALID_PERTURBATION, got {doc['code']}")
    finally:
        server.terminate()
        server.wait(timeout=10)

    # Sanity: the recorded what-if must byte-match the toolkit's pinned
    # golden values.
    recorded = json.loads((FIXTURES / "whatif_dball_quick.json").read_text())
    pinned = json.loads(
        (REPO_ROOT / "tests" / "fixtures" / "goldens" / "whatif_dball_quick.json").read_text()
    )
    if recorded != pinned:
        sys.exit("service what-if disagrees with the pinned golden")
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
