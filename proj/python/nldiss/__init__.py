"""Two coupled nonlinear oscillators under correlated dissipation."""

from ._nldiss import (
    ConfigError,
    IntegrationError,
    OutputError,
    __version__,
    asymptotic_negativity,
    bloch_extract,
    bloch_solution,
    bose_einstein,
    coherent_state,
    config_keys,
    detect_esd,
    ladder_lower,
    manifold_state,
    negativity,
    parity,
    partial_transpose,
    product_density,
    rate_gamma,
    resolve_config,
    run_scenario,
    simulate,
    sweep_temperature,
    upsilons,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
