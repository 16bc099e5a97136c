# Errors, logging and input validation
