"""
evasilab - JSON web frontend
Small HTTP surface over the decision-tree solver, orbital computations,
partition planners and verification checks. Served by gunicorn (app:app).
"""

import logging
import os
from fractions import Fraction

from dotenv import load_dotenv
from flask import Flask, jsonify, request

load_dotenv()
from boolfun import BooleanFunction, decision_tree_complexity, make_property, property_to_function
from config import load_config
from errors import BadShape, EvasiLabError
from hgraph import named, paley_clique_check, weil_count_check
from numth import (
    SCHEMES, plan_chowla, plan_erh, plan_near_eva, plan_near_fermat, plan_uncond_sparse,
)
from perm import u_orbitals
from verify import SUITE, build_group, run_check

log = logging.getLogger(__name__)

app = Flask(__name__)
app.config["EVLAB"] = load_config(os.environ.get("EVLAB_CONFIG") or None)

# Requests that would run for minutes are refused up front
MAX_HTTP_VARS = 16
MAX_HTTP_PROPERTY_N = 6
HTTP_CHECKS = ("near_fermat_enum", "orbital_bounds", "paley_orbitals", "planners")


# ── Security Headers ────────────────────────────────────────

@app.after_request
def add_security_headers(response):
    response.headers["X-Content-Type-Options"] = "nosniff"
    response.headers["X-Frame-Options"] = "SAMEORIGIN"
    response.headers["Referrer-Policy"] = "strict-origin-when-cross-origin"
    response.headers["Content-Security-Policy"] = "default-src 'none'"
    response.headers["Cache-Control"] = "no-store"
    return response


# ── Error handlers: always return JSON for /api/* routes ────

@app.errorhandler(EvasiLabError)
def err_evasilab(e):
    log.info("rejected %s: %s", request.path, e)
    return jsonify({"error": str(e), "kind": e.__class__.__name__}), 400


@app.errorhandler(404)
def err_404(e):
    if request.path.startswith("/api/"):
        return jsonify({"error": "Not found"}), 404
    return str(e), 404


@app.errorhandler(405)
def err_405(e):
    if request.path.startswith("/api/"):
        return jsonify({"error": "Method not allowed"}), 405
    return str(e), 405


@app.errorhandler(500)
def err_500(e):
    if request.path.startswith("/api/"):
        return jsonify({"error": "Internal server error"}), 500
    return str(e), 500


def _config():
    return app.config["EVLAB"]


# ── Routes ──────────────────────────────────────────────────

@app.route("/health")
def health():
    return jsonify({"status": "ok", "checks": sorted(SUITE), "schemes": sorted(SCHEMES)})


@app.route("/api/dtc", methods=["POST"])
def api_dtc():
    """Decision-tree complexity of a property or a hex truth table."""
    data = request.get_json(silent=True)
    if not data:
        return jsonify({"error": "No data provided"}), 400

    prop = data.get("property")
    try:
        if prop:
            n = int(data.get("n", 0))
            if not 1 <= n <= MAX_HTTP_PROPERTY_N:
                return jsonify({"error": f"n must lie in [1, {MAX_HTTP_PROPERTY_N}]"}), 400
            f = property_to_function(make_property(prop, n))
        elif "table" in data:
            n_vars = int(data.get("vars", 0))
            if not 0 <= n_vars <= MAX_HTTP_VARS:
                return jsonify({"error": f"vars must lie in [0, {MAX_HTTP_VARS}]"}), 400
            f = BooleanFunction(n_vars, int(str(data["table"]), 16))
        else:
            return jsonify({"error": "Give a property with n, or a hex table with vars"}), 400
    except (ValueError, TypeError):
        return jsonify({"error": "Invalid numeric field"}), 400

    cfg = _config()
    result = decision_tree_complexity(f, cfg.dtc_budget, certificate=bool(data.get("certificate")),
                                      memo_key=cfg.memo_key)
    out = {"D": result.value, "N": f.n_vars, "evasive": result.value == f.n_vars}
    if result.adversary is not None:
        out["adversary"] = result.adversary
    return jsonify(out)


@app.route("/api/orbitals", methods=["POST"])
def api_orbitals():
    """u-orbitals of a group given as a JSON spec."""
    data = request.get_json(silent=True)
    if not data:
        return jsonify({"error": "No data provided"}), 400
    if "kind" not in data:
        return jsonify({"error": "Group kind is required"}), 400
    return jsonify(u_orbitals(build_group(data)).to_dict())


@app.route("/api/partition/<scheme>", methods=["POST"])
def api_partition(scheme):
    """Plan a partition certificate for n."""
    if scheme not in SCHEMES:
        return jsonify({"error": f"Unknown scheme: {scheme}"}), 400
    data = request.get_json(silent=True)
    if not data:
        return jsonify({"error": "No data provided"}), 400
    try:
        n = int(data["n"])
    except (KeyError, ValueError, TypeError):
        return jsonify({"error": "n is required"}), 400

    cfg = _config()
    H = named(data.get("H", "K3"))
    if scheme == "near_eva":
        cert = plan_near_eva(n, H)
    elif scheme == "near_fermat":
        cert = plan_near_fermat(n, H)
    elif scheme == "uncond_sparse":
        cert = plan_uncond_sparse(n)
    elif scheme == "erh":
        cert = plan_erh(n, Fraction(str(data.get("eps", cfg.erh_eps))))
    else:
        cert = plan_chowla(n, Fraction(str(data.get("delta", cfg.chowla_delta))))
    return jsonify(cert.to_dict())


@app.route("/api/paley")
def api_paley():
    """Clique check on P(q,d): ?q=17&d=8&h=3"""
    try:
        q, d, h = (int(request.args[k]) for k in ("q", "d", "h"))
    except (KeyError, ValueError):
        return jsonify({"error": "q, d and h are required integers"}), 400
    return jsonify(paley_clique_check(q, d, h))


@app.route("/api/weil", methods=["POST"])
def api_weil():
    data = request.get_json(silent=True)
    if not data:
        return jsonify({"error": "No data provided"}), 400
    try:
        q, l = int(data["q"]), int(data["l"])
        a_list = [int(a) for a in data.get("a", [])]
    except (KeyError, ValueError, TypeError):
        return jsonify({"error": "q and l are required integers, a a list of integers"}), 400
    return jsonify(weil_count_check(q, l, a_list))


@app.route("/api/verify/<check>", methods=["POST"])
def api_verify(check):
    """Run one of the quicker verification checks."""
    if check not in SUITE:
        return jsonify({"error": f"Unknown check: {check}"}), 404
    if check not in HTTP_CHECKS:
        raise BadShape(f"{check} is too long-running for HTTP; use evlab verify {check}")
    report = run_check(check, _config())
    return jsonify(report.to_dict(timings=True))


if __name__ == "__main__":
    app.run(debug=False, host="0.0.0.0", port=8080)
