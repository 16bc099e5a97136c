# Enums and value types shared across modules
