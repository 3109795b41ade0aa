import nox


@nox.session(reuse_venv=True, name="test-pydantic-v1")
def test_pydantic_v1(session: nox.Session) -> None:
    session.install("-e", ".")
    session.install("pytest==7.1.1", "pydantic<2")

    session.run("pytest", "--showlocals", "-m", "not slow", *session.posargs)
