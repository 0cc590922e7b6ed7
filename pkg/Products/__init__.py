# Products is a namespace shared with other Products.* distributions;
# setuptools releases without pkg_resources fall back to pkgutil.
try:
    import pkg_resources
except ImportError:
    from pkgutil import extend_path
    __path__ = extend_path(__path__, __name__)
else:
    pkg_resources.declare_namespace(__name__)
