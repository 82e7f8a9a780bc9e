from flask import Blueprint, current_app, request, jsonify
import logging

from models.scan_repository import ScanRepository

scans_bp = Blueprint('scans', __name__)

logger = logging.getLogger(__name__)


def _repo() -> ScanRepository:
    return ScanRepository(current_app.extensions['scan_store'])


@scans_bp.route('/', methods=['GET'])
def list_scans():
    """Stored scan runs, optionally filtered by ?n= and ?generator="""
    try:
        n = request.args.get('n', type=int)
        runs = _repo().list_runs(n, request.args.get('generator'))
        return jsonify({
            "success": True,
            "runs": runs,
            "count": len(runs)
        }), 200
    except Exception as e:
        logger.error(f"Error listing scan runs: {e}")
        return jsonify({
            "error": "Server error",
            "message": "Failed to list scan runs"
        }), 500


@scans_bp.route('/<int:run_id>', methods=['GET'])
def get_scan(run_id):
    """Full report of one stored run"""
    report = _repo().get_report(run_id)
    if report is None:
        return jsonify({
            "error": "Not found",
            "message": f"Scan run {run_id} does not exist"
        }), 404
    return jsonify({
        "success": True,
        "report": report
    }), 200


@scans_bp.route('/candidates', methods=['GET'])
def list_candidates():
    """Stored instances whose maximum fell below n - 1"""
    n = request.args.get('n', type=int)
    candidates = _repo().candidates(n)
    return jsonify({
        "success": True,
        "candidates": candidates,
        "count": len(candidates)
    }), 200


@scans_bp.route('/minimums', methods=['GET'])
def minimums():
    """Smallest observed maximum per degree across stored runs"""
    by_order = _repo().minimum_by_order(request.args.get('generator'))
    return jsonify({
        "success": True,
        "minimums": {str(n): m for n, m in sorted(by_order.items())}
    }), 200
