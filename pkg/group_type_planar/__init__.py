"""Group-type planar algebra - exact state sums and the relative-commutant model behind them."""

__version__ = "0.1.0"


def __getattr__(name: str):
    """Lazy imports so that importing the package stays cheap."""
    if name == "PlanarAlgebra":
        from group_type_planar.algebra import PlanarAlgebra
        return PlanarAlgebra
    if name == "GroupContext":
        from group_type_planar.groups import GroupContext
        return GroupContext
    if name == "CommutantModel":
        from group_type_planar.commutants import CommutantModel
        return CommutantModel
    if name == "StateSumEvaluator":
        from group_type_planar.statesum import StateSumEvaluator
        return StateSumEvaluator
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = ["CommutantModel", "GroupContext", "PlanarAlgebra", "StateSumEvaluator"]
