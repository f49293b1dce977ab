import hypothesis

hypothesis.settings.register_profile(
    "curvecross",
    deadline=None,
    derandomize=True,
    print_blob=False,
)
hypothesis.settings.load_profile("curvecross")
