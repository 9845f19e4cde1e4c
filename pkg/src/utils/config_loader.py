"""
Configuration loader for the robust benchmarking harness.
"""

import os
import yaml
from pathlib import Path
from typing import Dict, Any, Optional
from dataclasses import dataclass

CACHE_ENV_VAR = "RBENCH_CACHE"


@dataclass
class TimerConfig:
    """Timer calibration configuration."""
    tau_acc_ns: Optional[int]
    j_max: int
    precision_samples: int


@dataclass
class OracleConfig:
    """Oracle function configuration."""
    kind: str
    a: float
    b: float
    table_file: Optional[str] = None
    check_ranges: bool = True


@dataclass
class TuningConfig:
    """Tuning configuration."""
    budget_s: float
    cache_path: str


@dataclass
class ExperimentSettings:
    """Default experiment shape for the run command."""
    budget_s: float
    measurements_per_trial: int
    trials: int
    warmup_execs: int


@dataclass
class AnalysisConfig:
    """Analysis configuration."""
    threshold: float
    trim_percentile: float
    kde_grid_size: int


@dataclass
class LoggingConfig:
    """Logging configuration."""
    level: str
    file: str


class Config:
    """Main configuration class."""
    
    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration.
        
        Args:
            config_path: Path to config.yaml file. If None, uses default.
        """
        if config_path is None:
            project_root = Path(__file__).parent.parent.parent
            config_path = project_root / "config" / "config.yaml"
        
        self.config_path = Path(config_path)
        self._raw_config = self._load_yaml()
        self._validate_config()
        self._parse_config()
    
    def _load_yaml(self) -> Dict[str, Any]:
        """Load YAML configuration file."""
        if not self.config_path.exists():
            raise FileNotFoundError(f"Config file not found: {self.config_path}")
        
        with open(self.config_path, 'r') as f:
            config = yaml.safe_load(f)
        
        return config or {}
    
    def _validate_config(self):
        """Validate required configuration sections exist."""
        required_sections = [
            'timer', 'oracle', 'tuning', 'experiment', 'analysis', 'logging'
        ]
        
        for section in required_sections:
            if section not in self._raw_config:
                raise ValueError(f"Missing required config section: {section}")
    
    def _parse_config(self):
        """Parse configuration into dataclass objects."""
        timer = self._raw_config['timer']
        self.timer = TimerConfig(
            tau_acc_ns=timer.get('tau_acc_ns'),
            j_max=timer.get('j_max', 10000),
            precision_samples=timer.get('precision_samples', 1000)
        )
        
        oracle = self._raw_config['oracle']
        self.oracle = OracleConfig(
            kind=oracle.get('kind', 'logistic'),
            a=oracle.get('a', 0.009),
            b=oracle.get('b', 0.5),
            table_file=oracle.get('table_file'),
            check_ranges=oracle.get('check_ranges', True)
        )
        
        # The environment wins over the file for the cache location
        tuning = self._raw_config['tuning']
        self.tuning = TuningConfig(
            budget_s=tuning.get('budget_s', 5.0),
            cache_path=os.environ.get(
                CACHE_ENV_VAR,
                tuning.get('cache_path', 'data/cache/tune_cache.json')
            )
        )
        
        exp = self._raw_config['experiment']
        self.experiment = ExperimentSettings(
            budget_s=exp.get('budget_s', 10.0),
            measurements_per_trial=exp.get('measurements_per_trial', 10000),
            trials=exp.get('trials', 10),
            warmup_execs=exp.get('warmup_execs', 1)
        )
        
        analysis = self._raw_config['analysis']
        self.analysis = AnalysisConfig(
            threshold=analysis.get('threshold', 0.30),
            trim_percentile=analysis.get('trim_percentile', 95),
            kde_grid_size=analysis.get('kde_grid_size', 512)
        )
        
        log = self._raw_config['logging']
        self.logging = LoggingConfig(
            level=log.get('level', 'INFO'),
            file=log.get('file', 'logs/rbench.log')
        )
    
    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return self._raw_config
    
    def __repr__(self) -> str:
        return f"Config(path='{self.config_path}')"


def load_config(config_path: Optional[str] = None) -> Config:
    """
    Load configuration from YAML file.
    
    Args:
        config_path: Path to config.yaml. If None, uses default.
        
    Returns:
        Config object
    """
    return Config(config_path)
