from flask import Blueprint, request, jsonify
import logging

from models.errors import MLTError
from models.set_family import SetFamily
from services.lemma1_service import decompose, find_covered_subset

lemma_bp = Blueprint('lemma', __name__)

logger = logging.getLogger(__name__)


@lemma_bp.route('/lemma1', methods=['POST'])
def covered_subset():
    """Decompose a family {X, subsets} and look for a covered subset"""
    data = request.get_json(silent=True)
    if not data or 'X' not in data or 'subsets' not in data:
        return jsonify({
            "error": "No data provided",
            "message": "Body must contain 'X' and 'subsets'"
        }), 400

    try:
        family = SetFamily.of(data['X'], data['subsets'])
        y1, y2, k1, k2 = decompose(family)
        witness = find_covered_subset(family)
    except MLTError as e:
        return jsonify(e.to_dict()), e.http_status
    except TypeError:
        return jsonify({
            "error": "Invalid input",
            "message": "X and every subset must be lists of integers"
        }), 400

    if witness is None:
        logger.info(f"No covered subset for |X|={len(family.X)}, s={family.s}")

    return jsonify({
        "success": True,
        "Y1": sorted(y1),
        "Y2": sorted(y2),
        "k1": k1,
        "k2": k2,
        "witness": witness
    }), 200
