# Verification suites, one module per family of results. Modules register their suites on import;
# verify.load_suites() imports them in this order, which is also the order of "verify all".
__all__ = ['orbits', 'keyproperty', 'cones', 'films', 'surfaces']
