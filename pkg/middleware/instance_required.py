from functools import wraps
from flask import jsonify, request, g
import logging

from models.errors import ParseError
from models.instance_file import InstanceFile
from models.mls import validate

logger = logging.getLogger(__name__)


def _parse_body():
    data = request.get_json(silent=True)
    if data is None:
        return None, (jsonify({
            "error": "No data provided",
            "message": "Request body must be an mls-v1 JSON document"
        }), 400)
    try:
        return InstanceFile.from_dict(data), None
    except ParseError as e:
        logger.info(f"Rejected instance body: {e.message}")
        return None, (jsonify(e.to_dict()), 400)


def instance_required(f):
    """
    Decorator to require a parseable mls-v1 request body

    Sets g.instance to the parsed InstanceFile
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        instance, error = _parse_body()
        if error:
            return error
        g.instance = instance
        return f(*args, **kwargs)

    return decorated_function


def valid_instance_required(f):
    """
    Decorator to require a body that is a valid matroidal Latin square

    Answers 422 with the violation list otherwise
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        instance, error = _parse_body()
        if error:
            return error
        violations = validate(instance.mls)
        if violations:
            return jsonify({
                "error": "Validation failed",
                "message": "Grid is not a matroidal Latin square",
                "violations": [v.to_dict() for v in violations]
            }), 422
        g.instance = instance
        return f(*args, **kwargs)

    return decorated_function
