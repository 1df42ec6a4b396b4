"""Description calculi: Q-, (Q,W)-, (T,Q,W)- and (Y,T,Q)-descriptions."""
