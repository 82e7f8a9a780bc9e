from flask import Flask, jsonify
from flask_cors import CORS
import logging

from config import config
from models.errors import MLTError
from models.sqlalchemy_models import DatabaseEngine

from routes.instance_routes import instances_bp
from routes.lemma_routes import lemma_bp
from routes.scan_routes import scans_bp

logger = logging.getLogger(__name__)


def create_app(env: str = 'default') -> Flask:
    app_config = config.get(env, config['default'])

    app = Flask(__name__)
    app.config.from_object(app_config)

    logging.basicConfig(level=app_config.LOG_LEVEL, format=app_config.LOG_FORMAT)

    CORS(app,
         origins=app_config.ALLOWED_ORIGINS,
         allow_headers=["Content-Type", "Accept", "Origin"],
         methods=["GET", "POST", "OPTIONS"])

    # Scan store shared by the scan routes
    store = DatabaseEngine(app_config.DATABASE_URL)
    store.create_tables()
    app.extensions['scan_store'] = store

    @app.errorhandler(MLTError)
    def handle_mlt_error(e):
        return jsonify(e.to_dict()), e.http_status

    # Health check endpoint
    @app.route('/ping', methods=['GET'])
    def ping():
        """Simple health check endpoint"""
        return jsonify({
            "status": "success",
            "message": "Server is running"
        }), 200

    # API info endpoint
    @app.route('/api/info', methods=['GET'])
    def api_info():
        """API information"""
        return jsonify({
            "name": "Matroidal Latin Square API",
            "version": "0.1.0",
            "formats": ["mls-v1"],
            "methods": ["exact", "greedy", "augment"],
            "status": "healthy"
        }), 200

    # Register blueprints
    app.register_blueprint(instances_bp, url_prefix='/api/instances')
    app.register_blueprint(lemma_bp, url_prefix='/api')
    app.register_blueprint(scans_bp, url_prefix='/api/scans')

    logger.info(f"API initialised ({env}), scan store at {app_config.DATABASE_URL}")
    return app


if __name__ == "__main__":
    create_app().run(debug=True, host='127.0.0.1', port=5000)
