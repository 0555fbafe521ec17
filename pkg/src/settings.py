"""
应用配置

config/config.yaml 提供默认值，LENSMETER_ 前缀的环境变量覆盖之，
例如 LENSMETER_LOGGING__LEVEL=DEBUG。
"""
from functools import lru_cache
from typing import List, Literal, Optional, Tuple, Type

from dotenv import load_dotenv
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from src.utils import load_config

load_dotenv()


class AppConfig(BaseModel):
    name: str = "Virtual Lens Meter"
    version: str = "1.0.0"


class LoggingConfig(BaseModel):
    level: str = "WARNING"
    log_dir: Optional[str] = None


class EstimationConfig(BaseModel):
    default_mode: Literal["full", "table"] = "full"
    kind_check: bool = True
    min_pixel_contrast: float = Field(default=0.05, ge=0.0)


class ReportConfig(BaseModel):
    default_format: Literal["text", "csv", "plotdata"] = "text"


class NoiseConfig(BaseModel):
    pixel_halfwidth: float = Field(default=0.5, ge=0.0)
    D_halfwidth: float = Field(default=0.05, ge=0.0)
    u_halfwidth: float = Field(default=0.05, ge=0.0)


class UncertaintyConfig(BaseModel):
    trials: int = Field(default=10000, ge=100)
    seed: int = 0
    max_failure_fraction: float = Field(default=0.01, ge=0.0, le=1.0)
    quantiles: List[float] = [0.025, 0.5, 0.975]
    noise: NoiseConfig = NoiseConfig()


class SimulationConfig(BaseModel):
    min_pixels: int = Field(default=100, ge=1)
    seed: int = 0


class Settings(BaseSettings):
    """全局配置"""

    model_config = SettingsConfigDict(
        env_prefix="LENSMETER_",
        env_nested_delimiter="__",
        extra="ignore",
    )

    app: AppConfig = AppConfig()
    logging: LoggingConfig = LoggingConfig()
    estimation: EstimationConfig = EstimationConfig()
    report: ReportConfig = ReportConfig()
    uncertainty: UncertaintyConfig = UncertaintyConfig()
    simulation: SimulationConfig = SimulationConfig()

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # 环境变量优先于YAML传入的值
        return env_settings, init_settings

    @classmethod
    def from_yaml(cls, config_file: str = "config/config.yaml") -> "Settings":
        """
        从YAML文件构建配置

        Args:
            config_file: 配置文件路径

        Returns:
            Settings实例
        """
        data = load_config(config_file)
        log_dir = (data.get("logging") or {}).get("log_dir")
        if log_dir == "":
            data["logging"]["log_dir"] = None
        return cls(**data)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """获取全局配置（缓存）"""
    return Settings.from_yaml()
