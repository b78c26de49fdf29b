import json
import logging
from pathlib import Path

import pandas as pd

from src.config import config
from src.dynsys import load_substitution
from src.errors import ConfigError, InvalidModel, PetLabError
from src.nilgroup import builtin, from_definition
from src.notation import parse_gpoly
from src.pet import PolySystem
from src.zsets import WindowSet

logger = logging.getLogger(__name__)


class DataLoader:
    @staticmethod
    def read_json(path):
        try:
            with open(path, 'r') as file:
                return json.load(file)
        except FileNotFoundError:
            raise ConfigError(f"file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path} is not valid JSON: {e.msg} (line {e.lineno})")

    @staticmethod
    def load_model(source):
        """Builtin model name (Z<s>, heisenberg, ut4), a file in data/models, or a JSON path"""
        model = builtin(source)
        if model is not None:
            return model
        path = Path(source)
        if not path.exists() and (config.models_dir / f"{source}.json").exists():
            path = config.models_dir / f"{source}.json"
        definition = DataLoader.read_json(path)
        missing = {'name', 's', 'mul', 'pow'} - set(definition)
        if missing:
            raise InvalidModel(f"model file {path} lacks {sorted(missing)}")
        try:
            model = from_definition(definition)
            logger.info(f"Loaded model '{model.name}' (s={model.s}) from {path}")
            return model
        except PetLabError:
            raise
        except Exception as e:
            logger.error(f"Error loading model: {str(e)}")
            raise InvalidModel(f"model file {path}: {str(e)}")

    @staticmethod
    def load_system(path, model):
        """A JSON list of Γ-polynomial strings, or an object with a 'system' list"""
        data = DataLoader.read_json(path)
        if isinstance(data, dict):
            data = data.get('system')
        if not isinstance(data, list) or not all(isinstance(x, str) for x in data):
            raise ConfigError(f"{path} must hold a list of Γ-polynomial strings")
        return PolySystem([parse_gpoly(text, model) for text in data])

    @staticmethod
    def load_substitution(source=None):
        path = Path(source) if source else config.substitution_path
        definition = DataLoader.read_json(path)
        return load_substitution(definition)

    @staticmethod
    def load_window_set(path):
        try:
            df = pd.read_csv(path)
        except FileNotFoundError:
            raise ConfigError(f"file not found: {path}")
        except Exception as e:
            logger.error(f"Error reading membership table: {str(e)}")
            raise ConfigError(f"cannot read membership table {path}: {str(e)}")
        return WindowSet.from_frame(df)

    @staticmethod
    def save_window_set(S, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        S.to_frame().to_csv(path, index=False, lineterminator='\n')
        logger.info(f"Membership table written to {path}")
        return path
