def test_version_exported():
    import smcselect
    assert hasattr(smcselect, "__version__")
    assert smcselect.__version__ == "0.1.0"
