version = 'not_available'
