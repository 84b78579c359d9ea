from hypothesis import settings

# exact rational arithmetic gets slow on large denominators
settings.register_profile("urysel", deadline=None, max_examples=50)
settings.load_profile("urysel")


def pytest_addoption(parser):
    parser.addoption(
        "--config", action="store", default="quicktest.ini",
        help="run configuration, relative to the tests directory"
    )
