from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # App settings
    APP_NAME: str = "relkit"
    DEBUG: bool = False
    VERSION: str = "1.0.0"
    LOG_LEVEL: str = "WARNING"

    # Cotas por defecto de enumeración
    DEFAULT_BOUND: int = 6
    DEFAULT_STEPS: int = 48  # pasos de derivación / aplicaciones de tabla
    EPS_CHAIN_BOUND: int = 8  # cadenas de transiciones ε en autómatas

    # Salida
    OUTPUT_FORMAT: str = "text"

    # Construcciones
    VERIFY_CONSTRUCTIONS: bool = True
    HOMOMORPHISM_SLACK: int = 4

    # Marcadores de bloque de los monoides M[ρ] y M(L)
    LEFT_MARKER: str = "ℓ"
    RIGHT_MARKER: str = "r"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="RELKIT_",
        case_sensitive=True,
        extra="ignore",  # Ignorar campos extra
    )


# Create settings instance
settings = Settings()
