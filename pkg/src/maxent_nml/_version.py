__title__ = "maxent_nml"
__version__ = "0.1.0"  # x-release-please-version
