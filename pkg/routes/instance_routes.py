from flask import Blueprint, request, jsonify, g
import logging

from middleware.instance_required import instance_required, valid_instance_required
from models.errors import MLTError
from models.mls import validate
from services.generator_service import generate
from services.transversal_service import METHODS, solve

# Create blueprint
instances_bp = Blueprint('instances', __name__)

logger = logging.getLogger(__name__)


def _int_arg(name, default=None):
    raw = request.args.get(name)
    if raw is None:
        return default
    return int(raw)


@instances_bp.route('/check', methods=['POST'])
@instance_required
def check_instance():
    """Validate an instance; always 200 with the violation list"""
    violations = validate(g.instance.mls)
    return jsonify({
        "success": True,
        "n": g.instance.mls.n,
        "ok": not violations,
        "violations": [v.to_dict() for v in violations]
    }), 200


@instances_bp.route('/solve', methods=['POST'])
@valid_instance_required
def solve_instance():
    """Solve an instance with ?method=exact|greedy|augment&budget=N"""
    method = request.args.get('method', 'exact')
    if method not in METHODS:
        return jsonify({
            "error": "Invalid method",
            "message": f"method must be one of {', '.join(METHODS)}"
        }), 400
    try:
        budget = _int_arg('budget')
        seed = _int_arg('seed', 0)
    except ValueError:
        return jsonify({
            "error": "Invalid parameter",
            "message": "budget and seed must be integers"
        }), 400

    try:
        report = solve(g.instance.mls, method, budget, seed, workers=1)
    except MLTError as e:
        logger.error(f"Solver error: {e.message}")
        return jsonify(e.to_dict()), e.http_status

    return jsonify({
        "success": True,
        "report": report.to_dict()
    }), 200


@instances_bp.route('/generate', methods=['POST'])
def generate_instance():
    """Generate an instance from {kind, n, p?, seed?}"""
    data = request.get_json(silent=True)
    if not data:
        return jsonify({
            "error": "No data provided",
            "message": "Request body is required"
        }), 400

    required_fields = ['kind', 'n']
    for field in required_fields:
        if data.get(field) is None:
            return jsonify({
                "error": "Missing required field",
                "message": f"Field '{field}' is required"
            }), 400

    try:
        instance = generate(data['kind'], data['n'], data.get('p'), data.get('seed'))
    except MLTError as e:
        return jsonify(e.to_dict()), e.http_status

    return jsonify({
        "success": True,
        "instance": instance.to_dict()
    }), 201
