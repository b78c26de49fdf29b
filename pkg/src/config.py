import yaml
from pathlib import Path
import logging

logger = logging.getLogger(__name__)

class Config:
    def __init__(self):
        self.root_dir = Path(__file__).parent.parent
        self.config = self.load_config()
        self._ensure_directories()

    def _ensure_directories(self):
        """Ensure required directories exist"""
        (self.root_dir / 'logs').mkdir(parents=True, exist_ok=True)

    def load_config(self):
        try:
            with open(self.root_dir / 'config.yaml', 'r') as file:
                config = yaml.safe_load(file)
            return config
        except Exception as e:
            logger.warning(f"Error loading config file: {e}. Using default configuration.")
            return self.get_default_config()

    def get_default_config(self):
        return {
            'algebra': {
                'degree_guard': 64,
                'integrality_radius': 5,
                'integrality_samples': 2000,
                'integrality_seed': 0
            },
            'search': {
                'max_shift': 1000000
            },
            'pet': {
                'ell': 2,
                'max_steps': 10000,
                'max_size': 2000,
                'time_limit': 60
            },
            'dynamics': {
                'substitution': 'chacon.json',
                'min_length': 1000000,
                'chunk': 4096,
                'base_fraction': 0.5
            },
            'classification': {
                'gap': 50,
                'run': 3
            },
            'cli': {
                'default_model': 'heisenberg',
                'seed': 0
            },
            'logging': {
                'filename': 'app.log',
                'level': 'INFO'
            }
        }

    def get(self, section, key, default=None):
        """Look up one setting, falling back to the built-in defaults"""
        value = self.config.get(section, {}).get(key)
        if value is None:
            value = self.get_default_config().get(section, {}).get(key, default)
        return value

    @property
    def models_dir(self):
        return self.root_dir / 'data' / 'models'

    @property
    def substitution_path(self):
        return self.root_dir / 'data' / 'substitutions' / self.get('dynamics', 'substitution')

    @property
    def log_path(self):
        return self.root_dir / 'logs' / self.get('logging', 'filename')

config = Config()
