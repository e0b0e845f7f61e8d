from hypothesis import HealthCheck, settings

settings.register_profile("quadpd", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("quadpd")


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("C", 1)[1].split(":")[0])):
            terminalreporter.write_line(line)
