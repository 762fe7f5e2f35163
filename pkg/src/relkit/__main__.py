from relkit.cli import entrypoint

entrypoint()
