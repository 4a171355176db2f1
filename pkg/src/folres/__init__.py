"""Resolution of 1-foliations on affine charts over prime fields."""
